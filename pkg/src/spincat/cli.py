"""Command-line interface: figure data as CSV and headline numbers as key=value text.

Every command is deterministic: identical flags give byte-identical output.
"""

from __future__ import annotations

import argparse
import math
import sys
import warnings
from contextlib import contextmanager

import numpy as np

from . import asymptotics, estimation, kraus, oracle
from .errors import SpinCatError
from .model import (
    apply_average_unitary,
    apply_environment,
    apply_probe_measurement,
    cat_coefficients,
    dephasing_kernel,
    probe_model,
)
from .observables import fidelity_squared, fidelity_to_cat, outcome_table, purity, recovery_report

#: exact-sum commands refuse spins above this twice-value
MAX_EXACT_TWO = 4000

ORACLE_TOL = 1e-10
ORACLE_TOL_DELTA_E = 1e-14


def fmt(x) -> str:
    return f"{x:.12e}"


class UsageError(Exception):
    pass


def _complex_pair(text: str) -> complex:
    parts = text.split(",")
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected re,im but got {text!r}")
    return complex(float(parts[0]), float(parts[1]))


def _twice(values: float) -> int:
    two = 2.0 * values
    if abs(two - round(two)) > 1e-9:
        raise UsageError(f"spin {values!r} is not an integer or half-integer")
    return int(round(two))


def read_config(path: str) -> list[str]:
    """Flat ``key = value`` file turned into the equivalent flag tokens."""
    tokens = []
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}: cannot parse line {raw.rstrip()!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            tokens += ["--" + key.replace("_", "-"), value]
    return tokens


def _add_physics(p, two_s=100, two_j=100):
    p.add_argument("--two-s", type=int, default=None, help=f"twice the system spin (default {two_s})")
    p.add_argument("--s", type=float, default=None, dest="s_value", help="system spin (integer or half-integer)")
    p.add_argument("--two-j", type=int, default=None, help=f"twice the environment spin (default {two_j})")
    p.add_argument("--j", type=float, default=None, dest="j_value", help="environment spin")
    p.add_argument("--g", type=float, default=0.01, help="dimensionless coupling")
    p.add_argument("--theta", type=float, default=math.pi / 6, help="environment angle in radians")
    p.add_argument("--c-plus", type=_complex_pair, default=complex(2 ** -0.5), help="re,im")
    p.add_argument("--c-minus", type=_complex_pair, default=complex(2 ** -0.5), help="re,im")
    p.set_defaults(default_two_s=two_s, default_two_j=two_j)


def _resolve_spins(args):
    two_s = args.two_s if args.two_s is not None else (
        _twice(args.s_value) if args.s_value is not None else args.default_two_s)
    two_j = args.two_j if args.two_j is not None else (
        _twice(args.j_value) if args.j_value is not None else args.default_two_j)
    for name, value in (("two_s", two_s), ("two_j", two_j)):
        if value > MAX_EXACT_TWO:
            raise UsageError(f"{name}={value} exceeds {MAX_EXACT_TWO} for exact sums; use 'asymptotic'")
        if value < 1:
            raise UsageError(f"{name} must be at least 1")
    return two_s, two_j


@contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
        return
    try:
        fh = open(path, "w", encoding="utf-8", newline="\n")
    except OSError as exc:
        raise UsageError(f"cannot open {path}: {exc.strerror}") from exc
    with fh:
        yield fh


def cmd_fig1(args, out):
    two_j = _resolve_spins(args)[1]
    if args.two_s_min < 1 or args.two_s_max < args.two_s_min:
        raise UsageError("empty two_s range")
    if args.two_s_max > MAX_EXACT_TWO:
        raise UsageError(f"two_s_max exceeds {MAX_EXACT_TWO}; use 'asymptotic'")
    out.write("two_s,s,F_prime,P_prime\n")
    for two_s in range(args.two_s_min, args.two_s_max + 1):
        cat = cat_coefficients(two_s, args.c_plus, args.c_minus)
        rho = apply_environment(cat, dephasing_kernel(two_j, args.theta, args.g, two_s))
        out.write(f"{two_s},{fmt(two_s / 2)},{fmt(fidelity_to_cat(rho))},{fmt(purity(rho))}\n")


def cmd_fig2(args, out):
    two_s, two_j = _resolve_spins(args)
    cat = cat_coefficients(two_s, args.c_plus, args.c_minus)
    rho = apply_environment(cat, dephasing_kernel(two_j, args.theta, args.g, two_s))
    table = outcome_table(rho, probe_model(two_j, args.theta, args.g, two_s))
    out.write("two_m,m,p_m,F_m,P_m\n")
    for i, two_m in enumerate(table.two_m):
        out.write(f"{two_m},{fmt(two_m / 2)},{fmt(table.p[i])},{fmt(table.fidelity[i])},{fmt(table.purity[i])}\n")
    out.write(f"# sum_p={fmt(table.total_probability)}\n")
    out.write(f"# mean_m={fmt(table.mean_outcome)}\n")
    out.write(f"# mean_F={fmt(table.mean_fidelity)}\n")
    out.write(f"# mean_P={fmt(table.mean_purity)}\n")


def headline_values(two_s, two_j, theta, g, c_plus, c_minus):
    """Ordered (key, value) pairs of the headline comparison."""
    cat = cat_coefficients(two_s, c_plus, c_minus)
    rho = apply_environment(cat, dephasing_kernel(two_j, theta, g, two_s))
    probe = probe_model(two_j, theta, g, two_s)
    table = outcome_table(rho, probe)
    unitary = apply_average_unitary(rho)
    m0 = 0 if two_j % 2 == 0 else 1
    _, post = apply_probe_measurement(rho, probe, m0)
    report = recovery_report(rho, post)
    s, j = two_s / 2, two_j / 2
    moments = kraus.cat_moments(cat)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        pred = kraus.perturbative_predictions(two_s, two_j, theta, g, moments)
    laws = asymptotics.scaling_laws(s, j, theta, g)
    regime = asymptotics.regime_check(s, j, theta, g)
    clt = asymptotics.clt_fidelity_squared(s, j, theta, g)
    return [
        ("two_s", two_s),
        ("two_j", two_j),
        ("m0_two", m0),
        ("F_prime", report.f_before),
        ("P_prime", report.p_before),
        ("F0", report.f_after),
        ("P0", report.p_after),
        ("p0", table.at(m0)[0]),
        ("F_u", fidelity_to_cat(unitary)),
        ("P_u", purity(unitary)),
        ("R_p", report.r_p),
        ("R_f", report.r_f),
        ("decoherence_gain", report.decoherence_gain),
        ("mean_F", table.mean_fidelity),
        ("mean_P", table.mean_purity),
        ("mean_m", table.mean_outcome),
        ("sum_p", table.total_probability),
        ("delta_P", report.p_after - report.p_before),
        ("F0_sq_minus_Fu_sq", fidelity_squared(post) - fidelity_squared(unitary)),
        ("clt_F_prime", math.sqrt(clt)),
        ("pred_P_prime", pred.purity_prime),
        ("pred_F0_sq", pred.fidelity_0_sq),
        ("pred_Fu_sq", pred.fidelity_u_sq),
        ("pred_p0", pred.p_m0),
        ("pred_delta_P", pred.delta_p),
        ("pred_delta_P_moments", pred.delta_p_moments),
        ("pred_delta_F_sq", pred.delta_f_sq),
        ("pred_R_p", pred.r_p),
        ("law_mean_F_sq", laws.mean_fsq_2nd),
        ("s_lower", regime.s_lower),
        ("s_upper", regime.s_upper),
        ("regime", regime.classification),
    ]


def _write_pairs(out, pairs):
    for key, value in pairs:
        if isinstance(value, str):
            text = value
        elif isinstance(value, (int, np.integer)):
            text = str(int(value))
        else:
            text = fmt(value)
        out.write(f"{key}={text}\n")


def cmd_headline(args, out):
    two_s, two_j = _resolve_spins(args)
    _write_pairs(out, headline_values(two_s, two_j, args.theta, args.g, args.c_plus, args.c_minus))


def cmd_estimate(args, out):
    if args.delta_e_over_kt is not None:
        ratio = args.delta_e_over_kt
    elif args.delta_e is not None and args.temperature is not None:
        theta = estimation.theta_from_thermal(args.delta_e, args.temperature)
        _write_pairs(out, [("theta", theta)])
        return
    else:
        raise UsageError("give --delta-e-over-kt, or both --delta-e (J) and --temperature (K)")
    _write_pairs(out, [("delta_e_over_kt", ratio), ("theta", estimation.theta_from_energy_ratio(ratio))])


def cmd_estimate_env(args, out):
    pairs = []
    if args.synthetic:
        two_s, two_j = _resolve_spins(args)
        cat = cat_coefficients(two_s, args.c_plus, args.c_minus)
        obs = estimation.decay_observation(two_s, two_j, args.theta, args.g_rate, args.f_threshold, cat=cat)
        t0, p0, s = obs.t0, obs.p0_prime, two_s / 2
        pairs += [("true_j", two_j / 2), ("true_g0", obs.g0), ("f_threshold", obs.f_threshold)]
    else:
        if args.t0 is None or args.p0 is None or args.s_value is None:
            raise UsageError("give --t0, --p0 and --s, or use --synthetic")
        t0, p0, s = args.t0, args.p0, args.s_value
    est = estimation.env_from_decay(t0, p0, s, args.theta)
    pairs += [
        ("t0", t0), ("P0_prime", p0), ("s", s), ("theta", est.theta),
        ("j", est.j), ("two_j", est.two_j), ("g0", est.g0),
        ("ill_conditioned", "true" if est.ill_conditioned else "false"),
    ]
    _write_pairs(out, pairs)


def cmd_asymptotic(args, out):
    s, j, theta, g = args.s_value, args.j_value, args.theta, args.g
    regime = asymptotics.regime_check(s, j, theta, g)
    laws = asymptotics.scaling_laws(s, j, theta, g)
    _write_pairs(out, [
        ("s", s), ("j", j), ("theta", theta), ("g", g),
        ("log_F_prime_sq", asymptotics.log_clt_fidelity_squared(s, j, theta, g)),
        ("F_prime_sq", asymptotics.clt_fidelity_squared(s, j, theta, g)),
        ("s_lower", regime.s_lower), ("s_upper", regime.s_upper),
        ("regime", regime.classification),
        ("p_loss_2nd", laws.p_loss_2nd), ("f0_sq_2nd", laws.f0_sq_2nd),
        ("mean_fsq_2nd", laws.mean_fsq_2nd), ("dp_4th", laws.dp_4th), ("rp_2nd", laws.rp_2nd),
    ])


def cmd_oracle_check(args, out):
    worst = oracle.grid_check()
    failed = []
    for name, value in worst.items():
        tol = ORACLE_TOL_DELTA_E if name == "delta_e_independence" else ORACLE_TOL
        ok = value <= tol
        if not ok:
            failed.append(name)
        out.write(f"{name}={fmt(value)} tol={fmt(tol)} {'ok' if ok else 'FAIL'}\n")
    if failed:
        out.write(f"# failed: {','.join(failed)}\n")
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spincat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--out", default=None, help="output path (default: standard output)")
        p.add_argument("--config", default=None, help="flat key=value file of flag defaults")
        p.set_defaults(func=func)
        return p

    p = command("fig1", cmd_fig1, "F' and P' versus s")
    _add_physics(p, two_j=100)
    p.add_argument("--two-s-min", type=int, default=1)
    p.add_argument("--two-s-max", type=int, default=200)

    _add_physics(command("fig2", cmd_fig2, "p_m, F''_m, P''_m versus outcome m"))
    _add_physics(command("headline", cmd_headline, "headline numbers with predictions"))

    p = command("estimate", cmd_estimate, "theta from thermal equilibrium")
    p.add_argument("--delta-e-over-kt", type=float, default=None)
    p.add_argument("--delta-e", type=float, default=None, help="level splitting in joules")
    p.add_argument("--temperature", type=float, default=None, help="kelvin")

    p = command("estimate-env", cmd_estimate_env, "j and g0 from (t0, P'0)")
    _add_physics(p)
    p.add_argument("--t0", type=float, default=None)
    p.add_argument("--p0", type=float, default=None, help="purity P'0 at t0")
    p.add_argument("--synthetic", action="store_true", help="generate (t0, P'0) from the exact model")
    p.add_argument("--g-rate", type=float, default=1.0, help="g per unit time for --synthetic")
    p.add_argument("--f-threshold", type=float, default=estimation.DEFAULT_F_THRESHOLD,
                   help="F' level defining t0")

    p = command("asymptotic", cmd_asymptotic, "closed forms at arbitrary scale")
    p.add_argument("--s", type=float, default=1e8, dest="s_value")
    p.add_argument("--j", type=float, default=1e8, dest="j_value")
    p.add_argument("--g", type=float, default=1e-8)
    p.add_argument("--theta", type=float, default=0.01)

    command("oracle-check", cmd_oracle_check, "analytic pipeline versus brute-force dilation")
    return parser


def _expand_config(argv):
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        raise UsageError("--config needs a path")
    rest = argv[:i] + argv[i + 2:]
    # config tokens go right after the subcommand so explicit flags win
    return rest[:1] + read_config(argv[i + 1]) + rest[1:]


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_expand_config(argv))
        with _output(args.out) as out:
            status = args.func(args, out)
    except (UsageError, SpinCatError) as exc:
        print(f"spincat: error: {exc}", file=sys.stderr)
        return 2
    return int(status or 0)


if __name__ == "__main__":
    sys.exit(main())
