import argparse
import logging
import sys

import numpy as np
from tqdm import tqdm

from core import GCV_MU_MAX, GCV_MU_MIN, GCV_POINTS, LOG_LEVEL, DeblurError, DimensionError, ParameterError
from blur import (
    BlurOperator,
    BoundaryCondition,
    Psf,
    add_noise,
    blur_extended,
    build_operator,
    field_of_view,
    gaussian_psf,
    motion_psf,
)
from multidim import Psf2D, build_operator_2d, disk_psf, gaussian_psf_2d, motion_psf_2d
from regularization import TikhonovProblem, rre, restore, smoothing_eigenvalues
from synthetic import oscillating_image, oscillating_signal, smooth_image, smooth_signal
from formats.pgm import read_pgm, write_pgm
from formats.psffile import read_psf, write_psf
from formats.shared import format_number, write_table
from formats.signalfile import read_signal, write_signal

APP_NAME = "fastdeblur"
TRUE_EXTENDED = "true-extended"
BC_NAMES = [bc.value for bc in BoundaryCondition]

logger = logging.getLogger(APP_NAME)


def load_data(path: str, dims: None | list[int] = None) -> np.ndarray:
    """A .pgm file gives an image; anything else is read as CSV"""
    if path.lower().endswith(".pgm"):
        return read_pgm(path)
    return read_signal(path, tuple(dims) if dims else None)


def save_data(path: str, data: np.ndarray):
    if path.lower().endswith(".pgm"):
        write_pgm(path, data)
    else:
        write_signal(path, data)


def make_operator(psf: Psf | Psf2D, shape: tuple[int, ...], bc: BoundaryCondition) -> BlurOperator:
    if isinstance(psf, Psf2D) and len(shape) == 2:
        return build_operator_2d(psf, shape, bc)
    if isinstance(psf, Psf) and len(shape) == 1:
        return build_operator(psf, shape[0], bc)
    raise DimensionError(f"{psf.weights.ndim}D PSF with {len(shape)}D data")


def _mu_grid(mu_range) -> tuple[tuple[float, float], int]:
    lo, hi, count = mu_range
    count = int(count)
    if not 0 < lo < hi or count < 2:
        raise ParameterError(f"invalid mu range {lo} {hi} {count}")
    return (lo, hi), count


def cmd_eigs(args):
    psf = read_psf(args.psf, args.normalize)
    shape = tuple(args.n)
    if isinstance(psf, Psf2D) and len(shape) == 1:
        shape = shape * 2
    op = make_operator(psf, shape, BoundaryCondition(args.bc))
    d = op.eigenvalues.ravel()
    rows = ((i, value.real, value.imag) for i, value in enumerate(d.astype(complex), start=1))
    write_table(args.out, ["index", "real", "imag"], rows)


def cmd_blur(args):
    f = load_data(args.input, args.dims)
    psf = read_psf(args.psf, args.normalize)
    if args.bc == TRUE_EXTENDED:
        g = blur_extended(f, psf)
    else:
        g = make_operator(psf, f.shape, BoundaryCondition(args.bc)).apply(f)
    save_data(args.output, add_noise(g, args.noise, args.seed))


def cmd_deblur(args):
    g = load_data(args.input, args.dims)
    psf = read_psf(args.psf, args.normalize)
    op = make_operator(psf, g.shape, BoundaryCondition(args.bc))
    smoother = smoothing_eigenvalues(args.reg, op)
    truth = None if args.truth is None else load_data(args.truth, args.dims)
    mu_range, count = _mu_grid(args.mu_range)
    mu = None if args.mu == "gcv" else float(args.mu)

    report = restore(op, smoother, g, mu=mu, truth=truth, mu_range=mu_range, count=count)
    save_data(args.output, report.restored)

    print(f"mu={format_number(report.mu_used)} source={report.mu_source}")
    if report.rre is not None:
        print(f"rre={format_number(report.rre)}")
    if op.bc.is_complex:
        print(f"imag={format_number(report.imag_residue)}")

    if args.curves:
        problem = TikhonovProblem(op, smoother, g)
        mus = np.geomspace(*mu_range, count)
        columns = [mus, problem.gcv_curve(mus)]
        header = ["mu", "G"]
        if truth is not None:
            columns.append(problem.rre_curve(mus, truth))
            header.append("rre")
        write_table(args.curves, header, zip(*columns))


def cmd_compare(args):
    """Blur a wide truth, then restore with every BC and tabulate the errors"""
    scene = load_data(args.input, args.dims)
    psf = read_psf(args.psf, args.normalize)
    g = add_noise(blur_extended(scene, psf), args.noise, args.seed)
    truth = field_of_view(scene, psf)
    mu_range, count = _mu_grid(args.mu_range)
    mus = np.geomspace(*mu_range, count)

    rows = []
    for name in tqdm(args.bc_list.split(","), desc="boundary conditions", disable=args.quiet):
        bc = BoundaryCondition(name.strip())
        op = make_operator(psf, g.shape, bc)
        problem = TikhonovProblem(op, smoothing_eigenvalues(args.reg, op), g)
        errors = problem.rre_curve(mus, truth)
        best = int(np.argmin(errors))
        mu_gcv, _ = problem.select_mu(mu_range, count)
        rre_gcv = rre(truth, problem.solve(mu_gcv))
        rows.append((bc.value, errors[best], mus[best], mu_gcv, rre_gcv))
        logger.info("%s: min rre %.4g at mu=%.3g", bc.value, errors[best], mus[best])
    write_table(args.out, ["bc", "min_rre", "mu_opt", "mu_gcv", "rre_gcv"], rows)


def cmd_psf(args):
    if args.kind == "gaussian":
        psf = gaussian_psf(args.m, args.sigma)
    elif args.kind == "gaussian2d":
        psf = gaussian_psf_2d(args.m, args.sigma)
    elif args.kind == "motion":
        psf = motion_psf(args.m)
    elif args.kind == "disk":
        psf = disk_psf(args.radius)
    else:
        psf = motion_psf_2d(args.radius, args.m)
    write_psf(args.output, psf)


_SCENES = {
    "smooth": (smooth_signal, smooth_image),
    "oscillating": (oscillating_signal, oscillating_image),
}


def cmd_synth(args):
    signal, image = _SCENES[args.scene]
    if len(args.n) == 1:
        scene = signal(args.n[0], args.margin)
    else:
        scene = image(args.n[0], args.n[1], args.margin)
    save_data(args.output, scene)


def _add_input_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--psf", required=True)
    parser.add_argument("--normalize", action="store_true", help="divide the PSF by its sum")
    parser.add_argument("--dims", type=int, nargs=2, metavar=("N1", "N2"))


_argparser = argparse.ArgumentParser(prog=APP_NAME)
_argparser.add_argument(
    "--log-level",
    type=str.upper,
    choices=["DEBUG", "INFO", "WARNING", "ERROR"],
    default=LOG_LEVEL.upper(),
)
_subparsers = _argparser.add_subparsers(dest="command", required=True)

_eigs = _subparsers.add_parser("eigs", help="write the eigenvalues of a blurring operator")
_add_input_flags(_eigs)
_eigs.add_argument("--n", type=int, nargs="+", required=True)
_eigs.add_argument("--bc", choices=BC_NAMES, required=True)
_eigs.add_argument("--out", required=True)
_eigs.set_defaults(func=cmd_eigs)

_blur = _subparsers.add_parser("blur", help="simulate blurred and noisy data")
_add_input_flags(_blur)
_blur.add_argument("--input", required=True)
_blur.add_argument("--bc", choices=BC_NAMES + [TRUE_EXTENDED], default=TRUE_EXTENDED)
_blur.add_argument("--noise", type=float, default=0.0)
_blur.add_argument("--seed", type=int, default=0)
_blur.add_argument("--output", required=True)
_blur.set_defaults(func=cmd_blur)

_deblur = _subparsers.add_parser("deblur", help="restore with Tikhonov regularization")
_add_input_flags(_deblur)
_deblur.add_argument("--input", required=True)
_deblur.add_argument("--bc", choices=BC_NAMES, required=True)
_deblur.add_argument("--reg", choices=["identity", "laplacian"], default="identity")
_deblur.add_argument("--mu", default="gcv", help="a positive number or 'gcv'")
_deblur.add_argument("--truth")
_deblur.add_argument("--output", required=True)
_deblur.add_argument("--curves")
_deblur.add_argument("--mu-range", type=float, nargs=3, metavar=("LO", "HI", "COUNT"), default=[GCV_MU_MIN, GCV_MU_MAX, GCV_POINTS])
_deblur.set_defaults(func=cmd_deblur)

_compare = _subparsers.add_parser("compare", help="tabulate restoration errors per BC")
_add_input_flags(_compare)
_compare.add_argument("--input", required=True, help="wide truth; the field of view is cropped from it")
_compare.add_argument("--noise", type=float, default=0.001)
_compare.add_argument("--seed", type=int, default=0)
_compare.add_argument("--bc-list", default=",".join(BC_NAMES))
_compare.add_argument("--reg", choices=["identity", "laplacian"], default="identity")
_compare.add_argument("--mu-range", type=float, nargs=3, metavar=("LO", "HI", "COUNT"), default=[GCV_MU_MIN, GCV_MU_MAX, GCV_POINTS])
_compare.add_argument("--out", required=True)
_compare.add_argument("--quiet", action="store_true", help="no progress bar")
_compare.set_defaults(func=cmd_compare)

_psf = _subparsers.add_parser("psf", help="write a standard PSF")
_psf.add_argument("--kind", choices=["gaussian", "gaussian2d", "motion", "disk", "motion2d"], required=True)
_psf.add_argument("--m", type=int, default=3)
_psf.add_argument("--sigma", type=float, default=1.5)
_psf.add_argument("--radius", type=int, default=4)
_psf.add_argument("--output", required=True)
_psf.set_defaults(func=cmd_psf)

_synth = _subparsers.add_parser("synth", help="write a synthetic signal or image")
_synth.add_argument("--n", type=int, nargs="+", required=True)
_synth.add_argument("--margin", type=int, default=0)
_synth.add_argument("--scene", choices=sorted(_SCENES), default="smooth")
_synth.add_argument("--output", required=True)
_synth.set_defaults(func=cmd_synth)


def main(argv=None) -> int:
    args = _argparser.parse_args(argv)
    logging.basicConfig(stream=sys.stderr, level=args.log_level, format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except DeblurError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except (OSError, ValueError) as e:
        # unreadable files and bad flag values such as --mu abc
        print(f"error: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
