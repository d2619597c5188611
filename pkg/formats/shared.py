import csv
import io
import numbers
import os
import tempfile


def format_number(x) -> str:
    """Shortest decimal string that reads back to the same double"""
    return repr(float(x))


def atomic_write(path: str, data: str | bytes):
    """Write to a temporary file in the target directory, then rename over `path`"""
    directory = os.path.dirname(os.path.abspath(path))
    mode = "wb" if isinstance(data, bytes) else "w"
    encoding = None if isinstance(data, bytes) else "utf-8"
    fd, temp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, mode, encoding=encoding, newline=None if encoding is None else "") as f:
            f.write(data)
        os.replace(temp_path, path)
    except BaseException:
        os.unlink(temp_path)
        raise


def write_table(path: str, header: list[str], rows):
    """CSV with a plain header line; floats in shortest round-trip form"""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(
            value if isinstance(value, (numbers.Integral, str)) else format_number(value) for value in row
        )
    atomic_write(path, buffer.getvalue())
