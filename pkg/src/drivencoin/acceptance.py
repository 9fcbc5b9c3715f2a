"""The acceptance suite behind ``drivencoin verify``.

Every check returns a :class:`CheckResult`; none of them raise on a failed
comparison.  Runs are cached so a schedule is evolved once per suite.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import asymptotics
from .errors import AsymptoticRegimeWarning
from .correlations import correlation_record, correlation_trajectory, records_as_arrays
from .evolution import Trajectory, evolve
from .momentum import exact_moments
from .observables import moments, parity_leak, symmetry_defect, tv_distance
from .schedule import Constant, Cosine, DrivingSchedule, Sawtooth, describe
from .state import DEFAULT_COIN, PLUS_COIN, initial_state

BALLISTIC_REFERENCE = 1 / math.sqrt(2) - 0.5
TAMPERABLE = ("ballistic-constant",)


@dataclass
class CheckResult:
    name: str
    passed: bool
    measured: float
    threshold: float
    detail: str = ""
    seconds: float = 0.0
    skipped: bool = False

    def line(self) -> str:
        status = "SKIP" if self.skipped else ("PASS" if self.passed else "FAIL")
        return (
            f"{status} {self.name}: measured={self.measured:.6g} threshold={self.threshold:.6g} "
            f"({self.seconds:.1f}s) {self.detail}"
        )


@dataclass
class SuiteContext:
    quick: bool = False
    tamper: Optional[str] = None
    horizon: int = 100
    n_k: int = 4096
    _runs: dict = field(default_factory=dict)

    @classmethod
    def create(cls, quick: bool = False, tamper: Optional[str] = None) -> "SuiteContext":
        if tamper is not None and tamper not in TAMPERABLE:
            raise ValueError(f"cannot tamper with {tamper!r}")
        if quick:
            return cls(quick=True, tamper=tamper, horizon=50, n_k=1024)
        return cls(tamper=tamper)

    def run(self, schedule: DrivingSchedule, horizon: Optional[int] = None, coin=DEFAULT_COIN) -> Trajectory:
        horizon = self.horizon if horizon is None else horizon
        key = (describe(schedule), horizon, coin)
        if key not in self._runs:
            self._runs[key] = evolve(
                initial_state(coin, max(horizon, 1)),
                schedule,
                horizon,
                keep_distributions=True,
                spectrum_stride=10,
                label=describe(schedule),
            )
        return self._runs[key]

    def all_runs(self, coin=None):
        return [r for (_, _, c), r in self._runs.items() if coin is None or c == coin]


UNITARY = Constant(1.0)
CLASSICAL = Constant(0.0)
SLOW = Cosine(0.1)


def _local_maxima(v) -> list:
    v = np.asarray(v)
    return [i for i in range(1, len(v) - 1) if v[i] > v[i - 1] and v[i] >= v[i + 1]]


def _local_minima(v) -> list:
    v = np.asarray(v)
    return [i for i in range(1, len(v) - 1) if v[i] < v[i - 1] and v[i] <= v[i + 1]]


def check_oracle_equivalence(ctx: SuiteContext) -> CheckResult:
    horizon = 50
    worst = 0.0
    for sch in (UNITARY, CLASSICAL, SLOW, Sawtooth()):
        traj = ctx.run(sch)
        oracle = exact_moments(sch, horizon, n_k=ctx.n_k, check_convergence=False)
        for t in range(horizon + 1):
            m = moments(traj.distributions[t])
            worst = max(worst, abs(m.m1 - oracle[t, 1]), abs(m.m2 - oracle[t, 2]))
    return CheckResult("oracle-equivalence", worst <= 1e-8, worst, 1e-8, f"t<=50, n_k={ctx.n_k}")


def check_ballistic_constant(ctx: SuiteContext) -> CheckResult:
    t_far = 50 if ctx.quick else 200
    t_near = t_far // 2
    reference = BALLISTIC_REFERENCE * (1.25 if ctx.tamper == "ballistic-constant" else 1.0)
    traj = ctx.run(UNITARY, t_far)
    ratio_far = traj.variance[t_far] / t_far**2
    ratio_near = traj.variance[t_near] / t_near**2
    rel = abs(ratio_far - reference) / reference
    approaching = abs(ratio_far - reference) < abs(ratio_near - reference)
    plus = ctx.run(UNITARY, t_far, PLUS_COIN)
    c1, c2 = asymptotics.velocity_moments(DEFAULT_COIN)
    detail = (
        f"V/t^2={ratio_far:.6f} at t={t_far}, {ratio_near:.6f} at t={t_near}, approaching={approaching}; "
        f"|+> start gives {plus.variance[t_far] / t_far**2:.6f}; "
        f"coin-aware C2-C1^2={c2 - c1 * c1:.6f}"
    )
    return CheckResult("ballistic-constant", rel <= 0.05 and approaching, rel, 0.05, detail)


def check_diffusive_limit(ctx: SuiteContext) -> CheckResult:
    traj = ctx.run(CLASSICAL)
    dv = max(abs(v - t) for t, v in zip(traj.t, traj.variance))
    dtv = max(tv_distance(traj.distributions[t], asymptotics.binomial_distribution(t)) for t in traj.t)
    worst = max(dv, dtv)
    return CheckResult(
        "diffusive-limit", worst <= 1e-10, worst, 1e-10, f"max|V-t|={dv:.3g}, max TV to binomial={dtv:.3g}"
    )


def check_oscillation_bounds(ctx: SuiteContext) -> CheckResult:
    v = np.array(ctx.run(SLOW).variance)
    vu = np.array(ctx.run(UNITARY).variance)
    t = np.arange(len(v), dtype=float)
    lower = float(np.min(v - t))
    upper = float(np.max(v - vu))
    bounds = lower >= -1e-6 and upper <= 1e-6
    drops = [i for i in range(len(v) - 1) if v[i + 1] < v[i]]
    near_quantum = min(abs(v[i] / vu[i] - 1) for i in range(30, 35))
    near_classical = min(abs(v[i] / i - 1) for i in range(46, 51))
    passed = bounds and bool(drops) and near_quantum <= 0.10 and near_classical <= 0.25
    detail = (
        f"min(V-t)={lower:.3g}, max(V-V_unitary)={upper:.3g}, decreasing steps={len(drops)}, "
        f"min|V/V_unitary-1| on t=30..34 is {near_quantum:.3f} (<=0.10), "
        f"min|V/t-1| on t=46..50 is {near_classical:.3f} (<=0.25)"
    )
    return CheckResult("oscillation-bounds", passed, float(len(drops)), 1.0, detail)


def check_periodic_generality(ctx: SuiteContext) -> CheckResult:
    counts = {}
    for sch in (Cosine(0.5), Cosine(0.3), Sawtooth()):
        counts[describe(sch)] = len(_local_maxima(ctx.run(sch).variance))
    fewest = min(counts.values())
    detail = ", ".join(f"{k}: {n} local maxima" for k, n in counts.items())
    return CheckResult("periodic-generality", fewest >= 2, float(fewest), 2.0, detail)


def check_entropy_monotonicity(ctx: SuiteContext) -> CheckResult:
    drops = {}
    for sch in (UNITARY, CLASSICAL, SLOW):
        h = np.array(ctx.run(sch).entropy)
        drops[describe(sch)] = float(np.min(np.diff(h)))
    worst = min(drops.values())
    detail = ", ".join(f"{k}: min dH={d:.3g}" for k, d in drops.items())
    return CheckResult("entropy-monotonicity", worst >= -1e-6, worst, -1e-6, detail)


def check_symmetry_parity(ctx: SuiteContext) -> CheckResult:
    sym = 0.0
    leak = 0.0
    # the non-default starting coins are asymmetric by construction
    runs = ctx.all_runs(DEFAULT_COIN)
    for traj in runs:
        for t, p in traj.distributions.items():
            sym = max(sym, symmetry_defect(p))
            leak = max(leak, parity_leak(p, t))
    return CheckResult(
        "symmetry-parity",
        sym <= 1e-10 and leak == 0.0,
        sym,
        1e-10,
        f"{len(runs)} runs, max parity leak={leak:.3g}",
    )


def check_cptp(ctx: SuiteContext) -> CheckResult:
    tr = herm = 0.0
    min_eig = np.inf
    runs = ctx.all_runs()
    for traj in runs:
        tr = max(tr, max(traj.trace_error))
        herm = max(herm, max(traj.hermiticity_defect))
        checked = [e for e in traj.min_eigenvalue if not math.isnan(e)]
        min_eig = min(min_eig, min(checked))
    passed = tr <= 1e-12 and herm <= 1e-12 and min_eig >= -1e-10
    detail = f"{len(runs)} runs, max trace error={tr:.3g}, max Hermiticity defect={herm:.3g}, min eigenvalue={min_eig:.3g}"
    return CheckResult("cptp", passed, max(tr, herm), 1e-12, detail)


def check_mixture_reproduction(ctx: SuiteContext) -> CheckResult:
    if ctx.quick:
        return CheckResult("mixture-reproduction", True, math.nan, 0.1, "needs t=90, not in the quick suite", skipped=True)
    traj = ctx.run(SLOW)
    worst = {}
    with warnings.catch_warnings():
        # the normalization defect is reported below instead
        warnings.simplefilter("ignore", AsymptoticRegimeWarning)
        defects = [asymptotics.asymptotic_quantum_distribution(t).defect for t in (90, 94)]
        for mode in ("abs", "signed"):
            tvs = []
            for t in (90, 94):
                w = asymptotics.mixture_weight(SLOW, t, mode)
                mix = asymptotics.mixture_distribution(t, w, signed=(mode == "signed"))
                tvs.append(tv_distance(traj.distributions[t], mix))
            worst[mode] = max(tvs)
    chosen = min(worst, key=worst.get)
    detail = (
        f"abs-kappa worst TV={worst['abs']:.3f}, signed-kappa worst TV={worst['signed']:.3f}, using {chosen}; "
        f"stationary-phase defects {defects[0]:.3f}, {defects[1]:.3f}"
    )
    return CheckResult("mixture-reproduction", worst[chosen] <= 0.1, worst[chosen], 0.1, detail)


def check_correlations(ctx: SuiteContext) -> CheckResult:
    h = ctx.horizon
    data = {describe(s): records_as_arrays(correlation_trajectory(s, h, 2)) for s in (UNITARY, CLASSICAL, SLOW)}
    d_min = min(float(np.min(a["discord"])) for a in data.values())
    gap_min = min(float(np.min(a["mid"] - a["discord"])) for a in data.values())
    ok_a = d_min >= -1e-6 and gap_min >= -1e-6
    undriven = float(np.max(np.abs(data["const(1)"]["mid"] - data["const(1)"]["discord"])))
    ok_b = undriven <= 0.05
    classical = float(np.max(data["const(0)"]["discord"]))
    ok_c = classical <= 1e-3
    slow = data[describe(SLOW)]
    q_min = [int(slow["t"][i]) for i in _local_minima(slow["mid"])]
    v = ctx.run(SLOW).variance
    v_min = _local_minima(v)
    dv_min = [i + 1 for i in _local_minima(np.diff(v))]

    def matched(a, b):
        return bool(a) and all(any(abs(x - y) <= 3 for y in b) for x in a)

    ok_d = matched(q_min, v_min) and matched(v_min, q_min)
    detail = (
        f"(a) min D={d_min:.3g}, min(Q-D)={gap_min:.3g} [{'ok' if ok_a else 'FAIL'}]; "
        f"(b) undriven max|Q-D|={undriven:.3g} [{'ok' if ok_b else 'FAIL'}]; "
        f"(c) const(0) max D={classical:.3g} [{'ok' if ok_c else 'FAIL'}]; "
        f"(d) Q minima at {q_min}, V minima at {v_min}, increment minima at {dv_min} [{'ok' if ok_d else 'FAIL'}]"
    )
    passed = ok_a and ok_b and ok_c and ok_d
    return CheckResult("correlations", passed, classical, 1e-3, detail)


def check_unit_anchors(ctx: SuiteContext) -> CheckResult:
    traj = ctx.run(UNITARY, 2)
    p1 = traj.distributions[1]
    p2 = traj.distributions[2]
    e1 = max(abs(p1.at(-1) - 0.5), abs(p1.at(1) - 0.5))
    e2 = max(abs(p2.at(-2) - 0.25), abs(p2.at(0) - 0.5), abs(p2.at(2) - 0.25))
    rec = correlation_record(evolve(initial_state(window=1), UNITARY, 1).final)
    got = (rec.mutual_info, rec.classical_corr, rec.discord, rec.mid)
    e3 = max(abs(a - b) for a, b in zip(got, (2.0, 1.0, 1.0, 1.0)))
    passed = max(e1, e2) <= 1e-12 and e3 <= 2e-3
    detail = f"P(t=1) err={e1:.3g}, P(t=2) err={e2:.3g}, t=1 (I,C,D,Q) err={e3:.3g}"
    return CheckResult("unit-anchors", passed, e3, 2e-3, detail)


def check_performance(ctx: SuiteContext) -> CheckResult:
    start = time.perf_counter()
    evolve(initial_state(window=100), SLOW, 100, keep_distributions=True)
    elapsed = time.perf_counter() - start
    return CheckResult("performance", elapsed < 5.0, elapsed, 5.0, "evolve, horizon 100, per-step observables")


CHECKS: tuple[Callable[[SuiteContext], CheckResult], ...] = (
    check_oracle_equivalence,
    check_ballistic_constant,
    check_diffusive_limit,
    check_oscillation_bounds,
    check_periodic_generality,
    check_entropy_monotonicity,
    check_mixture_reproduction,
    check_correlations,
    check_unit_anchors,
    check_performance,
    # these two inspect every run made above
    check_symmetry_parity,
    check_cptp,
)


def run_checks(quick: bool = False, tamper: Optional[str] = None, report: Optional[Callable[[str], None]] = None):
    """Run the whole suite; ``report`` receives one line per check as it finishes."""
    ctx = SuiteContext.create(quick, tamper)
    results = []
    for check in CHECKS:
        start = time.perf_counter()
        res = check(ctx)
        res.seconds = time.perf_counter() - start
        results.append(res)
        if report is not None:
            report(res.line())
    return results
