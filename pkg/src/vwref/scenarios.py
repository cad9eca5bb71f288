"""Scenario registry: declarative YAML records evaluated by the engine.

Each scenario names a computation (a localization on a fixed locus, a
q-series, a wall-crossing relation or a family of identities), the integer
bindings it needs, and optionally golden values to compare against.
"""

from __future__ import annotations

import copy
import fnmatch
import random
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Union

import yaml

from . import lambdaring, qseries, wallcross
from .cohring import CohRing, get_ring, ring_names, ring_params
from .eqkth import KINDS as ATOM_KINDS
from .eqkth import LINE, RANK2, TRIVIAL, EqKClass, dual, line, rank2, trivial
from .errors import MissingBinding, ScenarioSchemaError, UnknownScenario, VWRefError
from .expr import int_arg, parse_number, parse_scalar
from .localize import FixedLocusData, check_symmetry, chi_t, euler_oracle, pole_report
from .scalar import RatFunc, declared_parameters, eval_at_t1, quantum_integer, substitute_tr

KINDS = ("localize", "series", "wallcross", "identity")
MODELS = {
    "series": ("gen_type", "k3_vw", "k3_hilbert"),
    "wallcross": ("pairs_pg", "roundtrip", "uniform_covers"),
    "identity": ("eagon_northcott", "duality", "quantum_integers"),
}
ORACLES = ("line", "rank2", "none")

# helpers callable from scenario expressions
EXPR_FUNCS = {
    "chi_proj": lambda m, y: wallcross.projective_space_chi(int_arg(m), y),
    "hilb": lambda n: qseries.hilb_chi(int_arg(n)),
}


# ---------------------------------------------------------------------------
# schema


def _need(d: Mapping, key: str, where: str):
    if key not in d:
        raise ScenarioSchemaError(f"{where}: missing field {key!r}")
    return d[key]


def _validate_atom(rec: Any, where: str) -> None:
    if not isinstance(rec, Mapping):
        raise ScenarioSchemaError(f"{where}: atom must be a mapping")
    kind = _need(rec, "kind", where)
    if kind not in ATOM_KINDS:
        raise ScenarioSchemaError(f"{where}: unknown atom kind {kind!r}")
    _need(rec, "weight", where)
    if kind == LINE:
        _need(rec, "c1", where)
    if kind == RANK2:
        _need(rec, "ch", where)
    if rec.get("sign", 1) not in (1, -1):
        raise ScenarioSchemaError(f"{where}: sign must be 1 or -1")
    extra = set(rec) - {"kind", "weight", "c1", "ch", "sign", "mult", "note"}
    if extra:
        raise ScenarioSchemaError(f"{where}: unexpected atom fields {sorted(extra)}")


def validate(d: Mapping) -> None:
    if not isinstance(d, Mapping):
        raise ScenarioSchemaError("scenario must be a mapping")
    name = _need(d, "name", "scenario")
    where = f"scenario {name}"
    kind = _need(d, "kind", where)
    if kind not in KINDS:
        raise ScenarioSchemaError(f"{where}: unknown kind {kind!r}")
    _need(d, "anchor", where)
    for key in ("requires",):
        if not isinstance(d.get(key, []), list):
            raise ScenarioSchemaError(f"{where}: {key} must be a list")
    if not isinstance(d.get("defaults", {}), Mapping):
        raise ScenarioSchemaError(f"{where}: defaults must be a mapping")
    sweep = d.get("sweep", [])
    if not isinstance(sweep, list) or not all(isinstance(b, Mapping) for b in sweep):
        raise ScenarioSchemaError(f"{where}: sweep must be a list of mappings")
    if kind == "localize":
        ring = _need(d, "ring", where)
        rname = ring if isinstance(ring, str) else _need(ring, "name", where)
        if rname not in ring_names():
            raise ScenarioSchemaError(f"{where}: unknown ring {rname!r}")
        if ("nvir" in d) == ("nvir_dual" in d):
            raise ScenarioSchemaError(f"{where}: give exactly one of nvir, nvir_dual")
        for key in ("numerator", "nvir", "nvir_dual"):
            recs = d.get(key, [])
            if not isinstance(recs, list):
                raise ScenarioSchemaError(f"{where}: {key} must be a list")
            for i, rec in enumerate(recs):
                _validate_atom(rec, f"{where} {key}[{i}]")
        _need(d, "tangent_ch", where)
        if d.get("oracle", "line") not in ORACLES:
            raise ScenarioSchemaError(f"{where}: oracle must be one of {ORACLES}")
    else:
        model = _need(d, "model", where)
        if model not in MODELS[kind]:
            raise ScenarioSchemaError(f"{where}: unknown {kind} model {model!r}")


@dataclass
class Scenario:
    name: str
    kind: str
    record: Dict[str, Any]
    source: Optional[str] = None

    @classmethod
    def from_dict(cls, d: Mapping, source: Optional[str] = None) -> "Scenario":
        validate(d)
        rec = copy.deepcopy(dict(d))
        return cls(rec["name"], rec["kind"], rec, source)

    @classmethod
    def from_yaml(cls, text: str, source: Optional[str] = None) -> "Scenario":
        return cls.from_dict(yaml.safe_load(text), source)

    def to_dict(self) -> Dict[str, Any]:
        return copy.deepcopy(self.record)

    def to_yaml(self) -> str:
        return yaml.safe_dump(self.record, sort_keys=False, allow_unicode=True)

    @property
    def anchor(self) -> str:
        return self.record["anchor"]

    @property
    def title(self) -> str:
        return self.record.get("title", self.name)

    @property
    def requires(self) -> List[str]:
        return list(self.record.get("requires", []))

    @property
    def defaults(self) -> Dict[str, Any]:
        return dict(self.record.get("defaults", {}))

    def binding_sets(self) -> List[Dict[str, Any]]:
        """Bindings used by the full check: the sweep, else the defaults."""
        sweep = self.record.get("sweep")
        if sweep:
            return [{**self.defaults, **b} for b in sweep]
        return [self.defaults]


# ---------------------------------------------------------------------------
# results


@dataclass
class RunResult:
    scenario: str
    bindings: Dict[str, Any]
    result_canonical: Union[str, Dict[str, str]]
    t1_value: Union[str, Dict[str, str], None]
    symmetric: Optional[bool]
    golden_match: Optional[bool]
    anchor: str
    checks: Dict[str, bool] = field(default_factory=dict)
    status: str = "proven"
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def failed_checks(self) -> List[str]:
        return [k for k, v in self.checks.items() if not v]

    def to_json(self) -> Dict[str, Any]:
        return {
            "scenario": self.scenario,
            "bindings": self.bindings,
            "result_canonical": self.result_canonical,
            "t1_value": self.t1_value,
            "symmetric": self.symmetric,
            "golden_match": self.golden_match,
            "anchor": self.anchor,
            "status": self.status,
            "checks": self.checks,
            "passed": self.passed,
            "metadata": self.metadata,
        }


@dataclass
class CheckReport:
    scenario: str
    anchor: str
    runs: List[RunResult] = field(default_factory=list)
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(r.passed for r in self.runs)

    def to_json(self) -> Dict[str, Any]:
        return {
            "scenario": self.scenario,
            "anchor": self.anchor,
            "passed": self.passed,
            "error": self.error,
            "runs": [r.to_json() for r in self.runs],
        }


# ---------------------------------------------------------------------------


def _coerce_binding(v):
    if isinstance(v, bool):
        raise ScenarioSchemaError("boolean bindings are not supported")
    if isinstance(v, (int, Fraction)):
        return v
    if isinstance(v, str):
        return parse_number(v)
    raise ScenarioSchemaError(f"binding value {v!r} is not a number")


def _as_int(v, name: str) -> int:
    v = Fraction(v)
    if v.denominator != 1:
        raise ScenarioSchemaError(f"{name} must be an integer, got {v}")
    return int(v)


class Registry:
    def __init__(self, scenarios: Mapping[str, Scenario]):
        self._scenarios = dict(sorted(scenarios.items()))

    @classmethod
    def from_directory(cls, path: Union[str, Path]) -> "Registry":
        path = Path(path)
        found: Dict[str, Scenario] = {}
        for f in sorted(path.glob("*.yaml")):
            scn = Scenario.from_yaml(f.read_text(), str(f))
            if scn.name in found:
                raise ScenarioSchemaError(f"duplicate scenario {scn.name}")
            found[scn.name] = scn
        return cls(found)

    def names(self) -> List[str]:
        return list(self._scenarios)

    def get(self, name: str) -> Scenario:
        if name not in self._scenarios:
            raise UnknownScenario(name)
        return self._scenarios[name]

    def __contains__(self, name: str) -> bool:
        return name in self._scenarios

    # -- bindings -----------------------------------------------------------
    def resolve(self, scn: Scenario, bindings: Optional[Mapping[str, Any]]) -> Dict[str, Any]:
        env = {k: _coerce_binding(v) for k, v in (bindings or {}).items()}
        missing = [k for k in scn.requires if k not in env]
        if missing:
            raise MissingBinding(f"{scn.name} needs {', '.join(missing)}")
        allowed = set(scn.requires) | set(scn.defaults) | set(declared_parameters())
        unknown = set(env) - allowed
        if unknown:
            raise MissingBinding(f"{scn.name} does not use {', '.join(sorted(unknown))}")
        return env

    def _scalar_env(self, scn: Scenario, env: Mapping[str, Any]) -> Dict[str, Any]:
        out: Dict[str, Any] = dict(env)
        for k, v in (scn.record.get("let") or {}).items():
            out[k] = parse_scalar(str(v), out)
        return out

    # -- localization -------------------------------------------------------
    def _ring(self, scn: Scenario, env: Mapping[str, Any]) -> CohRing:
        spec = scn.record["ring"]
        if isinstance(spec, str):
            name, overrides = spec, {}
        else:
            name = spec["name"]
            overrides = {k: v for k, v in spec.items() if k != "name"}
        # numeric bindings of ring parameters (e.g. g=3) specialise the ring
        for p in ring_params(name):
            if p in env and p not in overrides:
                overrides[p] = env[p]
        return get_ring(name, **overrides)

    def _atoms(self, recs, ring: CohRing, env) -> EqKClass:
        atoms = []
        for rec in recs:
            mult = _as_int(parse_number(rec.get("mult", 1), env), "mult")
            if mult < 0:
                raise ScenarioSchemaError("mult must be non-negative")
            e = parse_number(rec["weight"], env) * 2
            e = _as_int(e, "twice the weight")
            sign = int(rec.get("sign", 1))
            kind = rec["kind"]
            if kind == LINE:
                atom = line(ring.parse(str(rec["c1"]), env), e, sign)
            elif kind == RANK2:
                atom = rank2(ring.parse(str(rec["ch"]), env), e, sign)
            else:
                atom = trivial(e, sign)
            atoms.extend([atom] * mult)
        return EqKClass(ring, atoms)

    def fixed_locus(self, name: str, bindings: Optional[Mapping[str, Any]] = None) -> FixedLocusData:
        scn = self.get(name)
        if scn.kind != "localize":
            raise ScenarioSchemaError(f"{name} is not a localization scenario")
        env = self._scalar_env(scn, self.resolve(scn, bindings))
        return self._fixed_locus(scn, env)

    def _fixed_locus(self, scn: Scenario, env) -> FixedLocusData:
        rec = scn.record
        ring = self._ring(scn, env)
        numerator = self._atoms(rec.get("numerator", []), ring, env)
        if "nvir" in rec:
            nvir = self._atoms(rec["nvir"], ring, env)
        else:
            nvir = dual(self._atoms(rec["nvir_dual"], ring, env))
        tangent = ring.parse(str(rec["tangent_ch"]), env)
        prefactor = parse_scalar(str(rec.get("prefactor", 1)), env)
        return FixedLocusData(ring, numerator, nvir, tangent, prefactor)

    def evaluate(self, name: str, bindings: Optional[Mapping[str, Any]] = None) -> RatFunc:
        return chi_t(self.fixed_locus(name, bindings))

    # -- running ------------------------------------------------------------
    def run(self, name: str, bindings: Optional[Mapping[str, Any]] = None) -> RunResult:
        scn = self.get(name)
        env = self.resolve(scn, bindings)
        runner = getattr(self, f"_run_{scn.kind}")
        return runner(scn, env)

    def check(self, name: str) -> CheckReport:
        scn = self.get(name)
        report = CheckReport(scn.name, scn.anchor)
        try:
            for b in scn.binding_sets():
                report.runs.append(self.run(name, b))
        except VWRefError as exc:
            report.error = f"{type(exc).__name__}: {exc}"
        return report

    def check_all(self, pattern: Optional[str] = None) -> List[CheckReport]:
        names = self.names()
        if pattern:
            names = [n for n in names if fnmatch.fnmatch(n, pattern) or pattern in n]
        return [self.check(n) for n in names]

    def _golden(self, text, env, checks: Dict[str, bool], label: str = "") -> RatFunc:
        g = parse_scalar(str(text), env, EXPR_FUNCS)
        checks[f"golden_roundtrip{label}"] = parse_scalar(g.canonical()) == g
        return g

    def _run_localize(self, scn: Scenario, env) -> RunResult:
        rec = scn.record
        senv = self._scalar_env(scn, env)
        data = self._fixed_locus(scn, senv)
        f = chi_t(data)
        t1 = eval_at_t1(f)
        checks: Dict[str, bool] = {}
        sym = check_symmetry(f)
        checks["symmetric"] = sym
        poles = pole_report(f)
        checks["cyclotomic_denominator"] = poles["cyclotomic_denominator"]
        oracle = rec.get("oracle", "line")
        meta: Dict[str, Any] = {"poles": poles, "ring": data.base.label}
        if oracle != "none":
            o = euler_oracle(data, allow_rank2=(oracle == "rank2"))
            checks["oracle_match"] = RatFunc.coerce(o) == RatFunc.coerce(t1)
            meta["oracle_value"] = str(o)
        golden = None
        if "expected" in rec:
            g = self._golden(rec["expected"], senv, checks)
            golden = f == g
            checks["golden_match"] = golden
        if "expected_t1" in rec:
            checks["t1_match"] = RatFunc.coerce(t1) == parse_scalar(str(rec["expected_t1"]), senv)
        for label, text in (rec.get("also_equals") or {}).items():
            checks[str(label)] = f == parse_scalar(str(text), senv, EXPR_FUNCS)
        return RunResult(scn.name, _jsonable(env), f.canonical(), str(t1), sym, golden, scn.anchor, checks, rec.get("status", "proven"), meta)

    def _series_checks(self, scn: Scenario, series: qseries.QSeries, senv, checks) -> Optional[bool]:
        rec = scn.record
        golden = None
        if "expected" in rec:
            golden = True
            for k, text in sorted(rec["expected"].items(), key=lambda kv: int(kv[0])):
                k = int(k)
                if k >= series.prec:
                    continue
                g = self._golden(text, senv, checks, f"_q{k}")
                golden = golden and series[k] == g
            checks["golden_match"] = golden
        if "expected_t1" in rec:
            ok = True
            for k, text in rec["expected_t1"].items():
                k = int(k)
                if k < series.prec:
                    ok = ok and RatFunc.coerce(eval_at_t1(series[k])) == parse_scalar(str(text), senv)
            checks["t1_match"] = ok
        return golden

    def _run_series(self, scn: Scenario, env) -> RunResult:
        rec = scn.record
        model = rec["model"]
        env = {**scn.defaults, **env}
        senv = self._scalar_env(scn, env)
        checks: Dict[str, bool] = {}
        meta: Dict[str, Any] = {}
        status = rec.get("status", "proven")
        order = _as_int(env.get("order", 2), "order")
        if model == "gen_type":
            series = qseries.gen_type_series(_as_int(env["P2"], "P2"), order, registry=self)
        elif model == "k3_vw":
            r = _as_int(env["r"], "r")
            series = qseries.vw_k3_series(r, order)
            if qseries.is_prime(r):
                checks["closed_form_prime_rank"] = series == qseries.gk_rhs(r, order)
                if r == 2:
                    checks["literal_root_of_unity_average"] = series == qseries.gk_rhs_literal_rank2(order)
            else:
                status = "conjectural"
        else:  # k3_hilbert
            series = qseries.delta_tilde(order)
            eta = qseries.eta24(order)
            checks["eta24_at_t1"] = {k: int(v.constant()) for k, v in series.at_t1().items()} == eta
            h1 = qseries.hilb_chi(1)
            checks["hilb1_hodge_oracle"] = h1 == qseries.chi_minus_t_from_hodge(qseries.K3_HODGE)
            checks["hilb_euler_numbers"] = all(
                eval_at_t1(qseries.hilb_chi(n)) == qseries.euler_hilb_k3(n) for n in range(0, 5)
            )
            inv = series.inverse()
            checks["inverse_generic_path"] = inv == series.inverse_generic()
            meta["hilb_chi"] = {n: qseries.hilb_chi(n).canonical() for n in range(0, 4)}
        sym = series.is_bar_symmetric()
        checks["symmetric"] = sym
        checks["cyclotomic_denominator"] = all(
            pole_report(c)["cyclotomic_denominator"] for c in series.coeffs.values()
        )
        golden = self._series_checks(scn, series, senv, checks)
        t1 = {str(k): str(v) for k, v in series.at_t1().items()}
        table = {str(k): v for k, v in series.table().items()}
        return RunResult(scn.name, _jsonable(env), table, t1, sym, golden, scn.anchor, checks, status, meta)

    def _run_wallcross(self, scn: Scenario, env) -> RunResult:
        rec = scn.record
        model = rec["model"]
        env = {**scn.defaults, **env}
        senv = self._scalar_env(scn, env)
        checks: Dict[str, bool] = {}
        status = rec.get("status", "proven")
        golden = None
        sym = None
        if model == "pairs_pg":
            res = wallcross.pairs_pg(_as_int(env["p_g"], "p_g"), _as_int(env["chi"], "chi"))
            sym = all(check_symmetry(v) for v in res.values())
            checks["symmetric"] = sym
            if "expected" in rec:
                golden = True
                for key, text in rec["expected"].items():
                    golden = golden and res[key] == self._golden(text, senv, checks, f"_{key}")
                checks["golden_match"] = golden
            result = {k: v.canonical() for k, v in res.items()}
            t1 = {k: str(eval_at_t1(v)) for k, v in res.items()}
        elif model == "roundtrip":
            result, t1 = self._roundtrip(env, checks)
            status = "identity"
        else:
            result, t1 = self._uniform_covers(env, checks)
        return RunResult(scn.name, _jsonable(env), result, t1, sym, golden, scn.anchor, checks, status)

    def _roundtrip(self, env, checks):
        rng = random.Random(_as_int(env.get("seed", 0), "seed"))
        n_max = _as_int(env.get("N", 4), "N")
        trials = _as_int(env.get("trials", 3), "trials")
        count = 0
        for N in range(1, n_max + 1):
            for trial in range(trials):
                for hzero in (True, False):
                    chis = {m: rng.choice([c for c in range(-6, 10) if c]) for m in range(1, N + 1)}
                    profile = wallcross.ChargeProfile(N, chis, hzero)
                    vw = {m: _random_ratfunc(rng) for m in range(1, N + 1)}
                    pairs = wallcross.pairs_map(profile, vw)
                    back = wallcross.vw_from_pairs(profile, pairs)
                    key = f"N{N}_trial{trial}_{'hzero' if hzero else 'desk2'}"
                    checks[f"roundtrip_{key}"] = all(back[m] == vw[m] for m in back)
                    vw1 = {m: eval_at_t1(v).constant() for m, v in vw.items()}
                    checks[f"t1_commutes_{key}"] = eval_at_t1(pairs[N]).constant() == wallcross.pairs_numeric(profile, vw1)
                    count += 1
        return f"{count} randomized round trips", None

    def _uniform_covers(self, env, checks):
        r_max = _as_int(env.get("r_max", 4), "r_max")
        lo = _as_int(env.get("chi_min", 5), "chi_min")
        hi = _as_int(env.get("chi_max", 9), "chi_max")
        for r in range(1, r_max + 1):
            for chi0 in range(lo, hi + 1):
                for d in range(0, 3):
                    X = wallcross.projective_bundle_chi(chi0, qseries.hilb_chi(d))
                    vd = 2 * d + chi0 - 1
                    lhs, rhs = wallcross.ball_identity(r, chi0, vd, X)
                    checks[f"uniform_r{r}_chi{chi0}_d{d}"] = lhs == rhs
                    if r == 1:
                        checks[f"primitive_chi{chi0}_d{d}"] = (
                            wallcross.primitive_vw(vd, chi0, X) == qseries.hilb_chi(d) * RatFunc.s_power(-2 * d)
                        )
        # summing uniform covers over r | N recovers the multiple cover formula
        for N in range(2, r_max + 1):
            chi_a = N * lo
            comps = {}
            expected = RatFunc()
            for r in range(1, N + 1):
                if N % r:
                    continue
                d = (N // r) % 3
                chi0 = chi_a // r
                X = wallcross.projective_bundle_chi(chi0, qseries.hilb_chi(d))
                vd = 2 * d + chi0 - 1
                comps[r] = (vd, X)
                expected = expected + qseries.multiple_cover(wallcross.primitive_vw(vd, chi0, X), r)
            P = wallcross.nis_pairs(chi_a, comps)
            profile = wallcross.ChargeProfile(N, {N: chi_a}, hzero=False)
            checks[f"divisor_sum_N{N}"] = wallcross.vw_from_pairs(profile, {N: P})[N] == expected
        return f"{len(checks)} uniform-cover identities", None

    def _run_identity(self, scn: Scenario, env) -> RunResult:
        rec = scn.record
        model = rec["model"]
        env = {**scn.defaults, **env}
        checks: Dict[str, bool] = {}
        if model == "eagon_northcott":
            top = _as_int(env.get("max_rank", 5), "max_rank")
            for r0 in range(1, top + 1):
                for r1 in range(r0, top + 1):
                    for key, ok in lambdaring.eagon_northcott_report(r0, r1).items():
                        checks[f"{key}_{r0}_{r1}"] = ok
            for rank in range(1, top + 1):
                for key, ok in lambdaring.corollary_check(rank).items():
                    checks[f"section_locus_{key}_rank{rank}"] = ok
        elif model == "duality":
            top = _as_int(env.get("max_rank", 4), "max_rank")
            for rank in range(1, top + 1):
                checks[f"duality_rank{rank}"] = lambdaring.duality_check(rank)
        else:
            top = _as_int(env.get("max", 12), "max")
            for chi in range(1, top + 1):
                for r in range(1, top + 1):
                    lhs = substitute_tr(quantum_integer(chi), r) * quantum_integer(r)
                    checks[f"qint_tr_{chi}_{r}"] = lhs == quantum_integer(r * chi)
                checks[f"qint_t2_{chi}"] = substitute_tr(quantum_integer(chi), 2) == quantum_integer(2 * chi) / quantum_integer(2)
        passed = sum(checks.values())
        return RunResult(
            scn.name, _jsonable(env), f"{passed}/{len(checks)} identities hold", None, None, None,
            scn.anchor, checks, "identity",
        )


def _random_ratfunc(rng: random.Random) -> RatFunc:
    """Random bar-symmetric element: a palindromic Laurent polynomial over a product of quantum integers."""
    width = rng.randint(0, 3)
    num = RatFunc()
    for j in range(width + 1):
        c = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
        num = num + (RatFunc.s_power(j) + RatFunc.s_power(-j)) * c
    if not num:
        num = RatFunc.coerce(1)
    den = RatFunc.coerce(1)
    for _ in range(rng.randint(0, 2)):
        den = den * quantum_integer(rng.randint(2, 4))
    return num / den


def _jsonable(env: Mapping[str, Any]) -> Dict[str, Any]:
    out = {}
    for k, v in sorted(env.items()):
        if isinstance(v, Fraction):
            v = v.numerator if v.denominator == 1 else str(v)
        out[k] = v
    return out


def builtin_scenario_dir():
    return resources.files("vwref").joinpath("data/scenarios")


_DEFAULT: Optional[Registry] = None


def default_registry() -> Registry:
    global _DEFAULT
    if _DEFAULT is None:
        with resources.as_file(builtin_scenario_dir()) as path:
            _DEFAULT = Registry.from_directory(path)
    return _DEFAULT
