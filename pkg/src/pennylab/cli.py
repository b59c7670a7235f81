"""Command-line front end: experiment configs in, reproducible CSV/JSON artifacts out.

Every run is fully determined by its config: flags override config-file values,
the effective config is echoed into each artifact header, and the run id is a
hash of the canonical config, so re-running an identical config reproduces
byte-identical output.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional

from .discounting import DiscountParams, certify_discounted_eq, min_rounds
from .exploiter import expected_average_payoff, guarantee, play_match
from .game import Action, average_payoff, cumulative_payoff, format_transcript
from .oracle import certify_gap
from .prng import (
    GeneratorSpec,
    blum_micali,
    broken_counter,
    broken_repeat,
    check_seed_space,
    eval_next_bit_predictor,
    passthrough,
)
from .strategies import (
    StrategySpec,
    alternator,
    as_seed,
    constant,
    describe,
    exploiter_vs,
    generator_backed,
    make_gamma_equilibrium,
    predictor_backed,
    prefix_tail,
    simulate,
    uniform_table,
)

_MISSING = object()


@dataclass(frozen=True)
class ExperimentConfig:
    """A fully resolved run: command, canonical field values, derived run id."""

    command: str
    values: dict[str, Any]
    run_id: str
    out: Optional[str]

    def canonical(self) -> str:
        body = ";".join(f"{k}={self.values[k]}" for k in sorted(self.values))
        return f"{self.command};{body}"


# --------------------------------------------------------------------------
# Descriptor parsing
# --------------------------------------------------------------------------


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"malformed fraction: {text!r}") from e


def _parse_kv(parts: list[str]) -> dict[str, str]:
    out = {}
    for part in parts:
        if "=" not in part:
            raise ValueError(f"malformed descriptor parameter: {part!r}")
        key, _, value = part.partition("=")
        out[key.strip()] = value.strip()
    return out


def _parse_action(text: str) -> Action:
    if text not in ("H", "T"):
        raise ValueError(f"malformed action: {text!r}")
    return Action(text)


def _parse_bool(text: str) -> bool:
    return text.strip().lower() in ("1", "true", "yes")


def parse_generator(text: str, n: int) -> GeneratorSpec:
    """Parse a generator descriptor like "bm,perm=add1,m=3" with output length n."""
    parts = [p.strip() for p in text.split(",")]
    kind, params = parts[0], _parse_kv(parts[1:])
    if kind == "bm":
        if "m" not in params:
            raise ValueError("generator bm requires m=<width>")
        return blum_micali(params.get("perm", "mulmod"), int(params["m"]), n)
    if kind == "passthrough":
        return passthrough(n)
    if kind == "repeat":
        return broken_repeat(n)
    if kind == "counter":
        if "m" not in params:
            raise ValueError("generator counter requires m=<width>")
        return broken_counter(int(params["m"]), n)
    raise ValueError(f"unknown generator family: {kind!r}")


def parse_strategy(desc: str, n: int, player: int = 1) -> StrategySpec:
    """Parse a strategy descriptor such as "uniform:8", "const:H", or "exploit:vs=alt:H".

    `player` selects the side for seat-dependent constructions (prefix-tail
    with a gamma parameter).
    """
    head, _, rest = desc.partition(":")
    head = head.strip()
    if head == "uniform":
        if not rest:
            raise ValueError("uniform requires a seed length, e.g. uniform:8")
        return uniform_table(int(rest))
    if head == "const":
        return constant(_parse_action(rest))
    if head == "alt":
        return alternator(_parse_action(rest or "H"))
    if head == "prefix-tail":
        params = _parse_kv([p for p in rest.split(",") if p])
        if "gamma" in params:
            horizon = int(params.get("n", n))
            if horizon != n:
                raise ValueError("prefix-tail horizon disagrees with --n")
            pair = make_gamma_equilibrium(horizon, parse_fraction(params["gamma"]))
            return pair[player - 1]
        if "prefix" in params:
            return prefix_tail(
                int(params["prefix"]),
                params.get("tail", "constant"),
                _parse_action(params.get("start", "H")),
            )
        raise ValueError("prefix-tail requires gamma=... or prefix=...")
    if head == "gen":
        return generator_backed(parse_generator(rest, n))
    if head == "pred":
        parts = [p.strip() for p in rest.split(",")]
        params = _parse_kv(parts[1:])
        return predictor_backed(parts[0], beat=_parse_bool(params.get("beat", "0")))
    if head == "exploit":
        before, marker, nested = rest.partition("vs=")
        if not marker:
            raise ValueError("exploit requires vs=<opponent descriptor>")
        params = _parse_kv([p for p in before.rstrip(",").split(",") if p])
        opponent = parse_strategy(nested, n, player=3 - player)
        return exploiter_vs(opponent, beat=_parse_bool(params.get("beat", "0")))
    raise ValueError(f"unknown strategy family: {head!r}")


# --------------------------------------------------------------------------
# Artifact formatting
# --------------------------------------------------------------------------


def frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def dec_str(x) -> str:
    return "%.15g" % float(x)


def _atomic_write(path: str, data: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".pennylab-")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(cfg: ExperimentConfig, text: str) -> None:
    if cfg.out:
        _atomic_write(cfg.out, text)
    else:
        sys.stdout.write(text)


def json_artifact(cfg: ExperimentConfig, payload: dict) -> str:
    record = {
        "command": cfg.command,
        "config": {k: str(v) for k, v in sorted(cfg.values.items()) if v is not None},
        "run_id": cfg.run_id,
    }
    record.update(payload)
    return json.dumps(record, sort_keys=True, indent=2) + "\n"


def csv_artifact(cfg: ExperimentConfig, header: list[str], rows: list[list[str]], extra: dict) -> str:
    lines = [f"# command={cfg.command}", f"# run_id={cfg.run_id}"]
    for key in sorted(cfg.values):
        if cfg.values[key] is not None:
            lines.append(f"# {key}={cfg.values[key]}")
    for key in sorted(extra):
        lines.append(f"# {key}={extra[key]}")
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# Config resolution
# --------------------------------------------------------------------------


def _load_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    with open(path) as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            key, _, value = line.partition("=")
            values[key.strip().replace("-", "_")] = value.strip()
    return values


def _resolve(args, filecfg: dict[str, str], name: str, caster, default=_MISSING):
    cli_value = getattr(args, name, None)
    if cli_value is not None:
        return cli_value
    if name in filecfg:
        return caster(filecfg[name])
    if default is _MISSING:
        raise ValueError(f"missing required field: {name}")
    return default


def parse_config(argv: list[str]) -> ExperimentConfig:
    """Parse argv (plus any --config file) into a validated ExperimentConfig."""
    parser = _build_parser()
    args = parser.parse_args(argv)
    filecfg = _load_config_file(args.config) if args.config else {}

    command = args.command
    values: dict[str, Any] = {}

    def take(name: str, caster, default=_MISSING):
        values[name] = _resolve(args, filecfg, name, caster, default)
        return values[name]

    if command == "simulate":
        n = take("n", int)
        take("p1", str)
        take("p2", str)
        take("seed1", str, "")
        take("seed2", str, "")
        parse_strategy(values["p1"], n, player=1)
        parse_strategy(values["p2"], n, player=2)
    elif command == "exploit":
        n = take("n", int)
        take("opponent", str)
        take("opponent_seed", int, 0)
        spec = parse_strategy(values["opponent"], n, player=2)
        check_seed_space(spec.seed_len)
        if not 0 <= values["opponent_seed"] < (1 << spec.seed_len):
            raise ValueError("opponent seed outside the declared seed space")
    elif command == "verify-eq":
        n = take("n", int)
        take("gamma", parse_fraction, None)
        take("p1", str, None)
        take("p2", str, None)
        if values["gamma"] is not None:
            pair = make_gamma_equilibrium(n, values["gamma"])
        elif not (values["p1"] and values["p2"]):
            raise ValueError("verify-eq needs --gamma or both --p1 and --p2")
        else:
            pair = (
                parse_strategy(values["p1"], n, player=1),
                parse_strategy(values["p2"], n, player=2),
            )
        for spec in pair:
            check_seed_space(spec.seed_len)
    elif command == "prng-test":
        n = take("n", int)
        take("gen", str)
        take("perm", str, "mulmod")
        take("m", int, 0)
        take("predictor", str)
        take("mode", str, "exact")
        take("samples", int, 10_000)
        take("eval_seed", int, 0)
        generator = _generator_from_values(values, n)
        if values["mode"] == "exact":
            check_seed_space(generator.seed_len)
    elif command == "discounted":
        take("delta", parse_fraction)
        take("epsilon", parse_fraction)
        params = DiscountParams.of(values["delta"], values["epsilon"])
        take("n", int, min_rounds(params))
        take("seed_len", int, None)
        take("prefix", str, "uniform")
        if values["prefix"] != "uniform" and not values["prefix"].startswith("gen:"):
            raise ValueError("prefix must be uniform or gen:<descriptor>")
    elif command == "sweep":
        take("n", int)
        take("k", str)
        _parse_k_range(values["k"], values["n"])
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(f"unknown command: {command!r}")

    canonical = command + ";" + ";".join(f"{k}={values[k]}" for k in sorted(values))
    explicit_run_id = getattr(args, "run_id", None) or filecfg.get("run_id")
    run_id = explicit_run_id or hashlib.sha256(canonical.encode()).hexdigest()[:12]
    out = getattr(args, "out", None) or filecfg.get("out")
    return ExperimentConfig(command, values, run_id, out)


def _generator_from_values(values: dict, n: int) -> GeneratorSpec:
    kind = values["gen"]
    if kind == "bm":
        if not values["m"]:
            raise ValueError("prng-test bm requires --m")
        return blum_micali(values["perm"], values["m"], n)
    if kind == "passthrough":
        return passthrough(n)
    if kind == "repeat":
        return broken_repeat(n)
    if kind == "counter":
        if not values["m"]:
            raise ValueError("prng-test counter requires --m")
        return broken_counter(values["m"], n)
    raise ValueError(f"unknown generator family: {kind!r}")


def _parse_k_range(text: str, n: int) -> list[int]:
    if ".." in text:
        lo, _, hi = text.partition("..")
        ks = list(range(int(lo), int(hi) + 1))
    else:
        ks = [int(part) for part in text.split(",")]
    if not ks or any(k < 0 or k > n for k in ks):
        raise ValueError("k values must lie in [0, n]")
    return ks


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pennylab",
        description="Randomness-budgeted repeated Matching Pennies laboratory.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="flat key = value config file")
        p.add_argument("--out", help="artifact path (stdout if omitted)")
        p.add_argument("--run-id", dest="run_id", help="override the derived run id")

    p = sub.add_parser("simulate", help="play two strategies with fixed seeds")
    p.add_argument("--n", type=int)
    p.add_argument("--p1")
    p.add_argument("--p2")
    p.add_argument("--seed1")
    p.add_argument("--seed2")
    common(p)

    p = sub.add_parser("exploit", help="run the consistent-set exploiter against an opponent")
    p.add_argument("--n", type=int)
    p.add_argument("--opponent")
    p.add_argument("--opponent-seed", dest="opponent_seed", type=int)
    common(p)

    p = sub.add_parser("verify-eq", help="certify equilibrium gaps for a profile")
    p.add_argument("--n", type=int)
    p.add_argument("--gamma", type=parse_fraction)
    p.add_argument("--p1")
    p.add_argument("--p2")
    common(p)

    p = sub.add_parser("prng-test", help="measure a next-bit predictor against a generator")
    p.add_argument("--n", type=int)
    p.add_argument("--gen", choices=("bm", "passthrough", "repeat", "counter"))
    p.add_argument("--perm")
    p.add_argument("--m", type=int)
    p.add_argument("--predictor")
    p.add_argument("--mode", choices=("exact", "sampled"))
    p.add_argument("--samples", type=int)
    p.add_argument("--eval-seed", dest="eval_seed", type=int)
    common(p)

    p = sub.add_parser("discounted", help="certify the discounted infinite-game construction")
    p.add_argument("--delta", type=parse_fraction)
    p.add_argument("--epsilon", type=parse_fraction)
    p.add_argument("--n", type=int)
    p.add_argument("--seed-len", dest="seed_len", type=int)
    p.add_argument("--prefix")
    common(p)

    p = sub.add_parser("sweep", help="exploiter guarantee sweep over opponent budgets")
    p.add_argument("--n", type=int)
    p.add_argument("--k")
    common(p)

    return parser


# --------------------------------------------------------------------------
# Command bodies
# --------------------------------------------------------------------------


def _cmd_simulate(cfg: ExperimentConfig) -> int:
    n = cfg.values["n"]
    s1 = parse_strategy(cfg.values["p1"], n, player=1)
    s2 = parse_strategy(cfg.values["p2"], n, player=2)
    seed1 = as_seed(cfg.values["seed1"] or "0" * s1.seed_len, s1.seed_len)
    seed2 = as_seed(cfg.values["seed2"] or "0" * s2.seed_len, s2.seed_len)
    transcript = simulate(s1, seed1, s2, seed2, n)
    avg = average_payoff(transcript)
    payload = {
        "transcript": format_transcript(transcript),
        "cumulative": cumulative_payoff(transcript),
        "average": frac_str(avg),
        "average_dec": dec_str(avg),
    }
    emit(cfg, json_artifact(cfg, payload))
    return 0


def _cmd_exploit(cfg: ExperimentConfig) -> int:
    n = cfg.values["n"]
    opponent = parse_strategy(cfg.values["opponent"], n, player=2)
    k = opponent.seed_len
    achieved = expected_average_payoff(opponent, n)
    bound = guarantee(n, k)
    match = play_match(opponent, cfg.values["opponent_seed"], n)
    rows = [
        [
            str(row.round),
            frac_str(row.p),
            str(row.alive_size),
            str(row.payoff),
            "%.12g" % row.phi,
            "%.12g" % row.delta_phi,
        ]
        for row in match.rows
    ]
    extra = {
        "achieved": frac_str(achieved),
        "achieved_dec": dec_str(achieved),
        "guaranteed": frac_str(bound),
        "guaranteed_dec": dec_str(bound),
        "margin": frac_str(achieved - bound),
        "final_phi": "%.12g" % match.final_phi,
        "traced_cumulative": str(match.cumulative),
    }
    header = ["round", "p_t", "alive_size", "payoff", "phi", "delta_phi"]
    emit(cfg, csv_artifact(cfg, header, rows, extra))
    return 0 if achieved >= bound else 1


def _cmd_verify_eq(cfg: ExperimentConfig) -> int:
    n = cfg.values["n"]
    gamma = cfg.values["gamma"]
    if gamma is not None:
        s1, s2 = make_gamma_equilibrium(n, gamma)
    else:
        s1 = parse_strategy(cfg.values["p1"], n, player=1)
        s2 = parse_strategy(cfg.values["p2"], n, player=2)
    report = certify_gap(s1, s2, n)
    payload = {
        "n": n,
        "p1": describe(s1),
        "p2": describe(s2),
        "value": frac_str(report.value),
        "value_dec": dec_str(report.value),
        "best_response_1": frac_str(report.best_response_1),
        "best_response_2": frac_str(report.best_response_2),
        "gap_1": frac_str(report.gap_1),
        "gap_2": frac_str(report.gap_2),
        "certified_epsilon": frac_str(report.certified_epsilon),
        "certified_epsilon_dec": dec_str(report.certified_epsilon),
    }
    status = 0
    if gamma is not None:
        certified = report.certified_epsilon <= gamma
        payload["gamma"] = frac_str(gamma)
        payload["certified"] = certified
        status = 0 if certified else 1
    emit(cfg, json_artifact(cfg, payload))
    return status


def _cmd_prng_test(cfg: ExperimentConfig) -> int:
    n = cfg.values["n"]
    generator = _generator_from_values(cfg.values, n)
    report = eval_next_bit_predictor(
        generator,
        cfg.values["predictor"],
        mode=cfg.values["mode"],
        samples=cfg.values["samples"],
        eval_seed=cfg.values["eval_seed"],
    )
    if report.exact:
        advantage = frac_str(report.advantage)
        per_position = [frac_str(p) for p in report.per_position]
    else:
        advantage = dec_str(report.advantage)
        per_position = [dec_str(p) for p in report.per_position]
    payload = {
        "generator": generator.describe(),
        "advantage": advantage,
        "advantage_dec": dec_str(report.advantage),
        "per_position": per_position,
        "best_position": report.best_position,
        "samples": report.samples,
        "exact": report.exact,
        "half_width": None if report.half_width is None else dec_str(report.half_width),
    }
    emit(cfg, json_artifact(cfg, payload))
    return 0


def _cmd_discounted(cfg: ExperimentConfig) -> int:
    params = DiscountParams.of(cfg.values["delta"], cfg.values["epsilon"])
    n = cfg.values["n"]
    prefix = cfg.values["prefix"]
    generator = None
    if prefix != "uniform":
        generator = parse_generator(prefix[len("gen:") :], n)
    cert = certify_discounted_eq(n, params, seed_len=cfg.values["seed_len"], generator=generator)
    payload = {
        "n": cert.n,
        "delta": frac_str(cert.delta),
        "epsilon": frac_str(cert.epsilon),
        "min_rounds": min_rounds(params),
        "prefix": prefix,
        "prefix_gap": frac_str(cert.prefix_gap),
        "tail_gain": frac_str(cert.tail),
        "tail_gain_dec": dec_str(cert.tail),
        "epsilon_prime": frac_str(cert.epsilon_prime),
        "epsilon_prime_dec": dec_str(cert.epsilon_prime),
        "certified": cert.certified,
    }
    emit(cfg, json_artifact(cfg, payload))
    return 0 if cert.certified else 1


def _cmd_sweep(cfg: ExperimentConfig) -> int:
    n = cfg.values["n"]
    ks = _parse_k_range(cfg.values["k"], n)
    rows = []
    all_ok = True
    for k in ks:
        achieved = expected_average_payoff(uniform_table(k), n)
        bound = guarantee(n, k)
        margin = achieved - bound
        all_ok = all_ok and margin >= 0
        rows.append(
            [
                str(k),
                str(n),
                frac_str(bound),
                frac_str(achieved),
                frac_str(margin),
                dec_str(bound),
                dec_str(achieved),
                dec_str(margin),
            ]
        )
    header = ["k", "n", "guaranteed", "achieved", "margin", "guaranteed_dec", "achieved_dec", "margin_dec"]
    emit(cfg, csv_artifact(cfg, header, rows, {"opponent_family": "uniform-table"}))
    return 0 if all_ok else 1


_COMMANDS = {
    "simulate": _cmd_simulate,
    "exploit": _cmd_exploit,
    "verify-eq": _cmd_verify_eq,
    "prng-test": _cmd_prng_test,
    "discounted": _cmd_discounted,
    "sweep": _cmd_sweep,
}


def run(cfg: ExperimentConfig) -> int:
    """Execute a resolved config; returns the process exit status."""
    return _COMMANDS[cfg.command](cfg)


def main(argv: Optional[list[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
        return run(cfg)
    except ValueError as e:
        record = {"error": str(e), "type": type(e).__name__}
        print(json.dumps(record, sort_keys=True), file=sys.stderr)
        return 2


def entry() -> None:  # console-script hook
    sys.exit(main())


if __name__ == "__main__":
    entry()
