"""Runnable demonstrations over the machine zoo and their reports.

Every accuracy figure compares against the zoo annotations, never against the
bounded-budget halting approximation the learners themselves use.  Reports
hold no timings, so identical configurations give byte-identical output.
"""

from __future__ import annotations

import dataclasses
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from typing import Any, Callable, Iterable

from .constructions import (
    construction, ex1_construction, thm2_construction, thm3_construction,
    thm4_construction, thm5_construction,
)
from .core import BoundedOracle, Tri, ZooOracle, empirical_robust_risk, robust_loss_bounded
from .dimensions import (
    NFL_GATE, margin_vc_bruteforce, nfl_adversary, robust_shattering_bruteforce,
    vc_dimension_bruteforce,
)
from .learners import (
    constant_learner, erm_learner, majority_vote_decoder, rerm_learner, seeded_arbitrary_learner,
)
from .machine import pair, to_text, zoo
from .oracles import Hypothesis, agnostic_rerm, robust_risk_on, weak_realizable_rerm
from .report import dumps_csv, dumps_json

__all__ = [
    "ConfigError", "ExperimentConfig", "DemoReport", "demo_thm2", "demo_thm3_twohalt",
    "demo_thm4", "demo_thm5_halting", "demo_ex1", "run_nfl", "dims", "zoo_list",
    "DEMOS", "DEFAULT_SAMPLE_SIZES", "LEARNERS",
]

STEP_BUDGET_ENV = "ROBUST_CPAC_STEP_BUDGET"
ENUM_BUDGET_ENV = "ROBUST_CPAC_ENUM_BUDGET"

# sample sizes M keep |support|^M at or below a few thousand learner calls
DEFAULT_SAMPLE_SIZES = {"thm2": 6, "thm3": 5, "thm4": 1, "thm5": 3, "ex1": 5}

ACCURACY_SETTINGS = {
    "thm2": (Fraction(1, 7), Fraction(1, 3)),
    "thm3": (Fraction(1, 3), Fraction(1, 3)),
    "thm5": (Fraction(1, 8), Fraction(1, 8)),
    "ex1": (Fraction(1, 3), Fraction(1, 2)),
}

LEARNERS = ("const0", "const1", "erm", "rerm", "arbitrary")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    bundle: str = "thm2"
    zoo: tuple[int, ...] | None = None
    pairs: tuple[tuple[int, int], ...] | None = None
    domain_window: int = 64
    param_window: int = 32
    robust_window: int = 12
    step_budget: int = 1000
    enum_budget: int = 10_000
    m: int = 2
    M: int | None = None
    learner: str = "erm"
    seed: int = 7
    workers: int = 1

    def __post_init__(self) -> None:
        for name in ("domain_window", "param_window", "robust_window", "step_budget", "enum_budget", "workers"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if self.m < 1:
            raise ConfigError("m must be positive")
        if self.M is not None and self.M < 0:
            raise ConfigError("M must be nonnegative")
        if self.zoo is not None:
            for i in self.zoo:
                if not 0 <= i < len(zoo()):
                    raise ConfigError(f"machine {i} is not in the zoo")
        if self.learner not in LEARNERS:
            raise ConfigError(f"unknown learner {self.learner!r}")

    @classmethod
    def from_env(cls, **kwargs) -> ExperimentConfig:
        """Budget values from the environment override the defaults, not explicit arguments."""
        for key, var in (("step_budget", STEP_BUDGET_ENV), ("enum_budget", ENUM_BUDGET_ENV)):
            if kwargs.get(key) is None and os.environ.get(var):
                try:
                    kwargs[key] = int(os.environ[var])
                except ValueError:
                    raise ConfigError(f"{var} must be an integer") from None
        return cls(**{k: v for k, v in kwargs.items() if v is not None})

    def sample_size(self, name: str) -> int:
        return DEFAULT_SAMPLE_SIZES.get(name, 0) if self.M is None else self.M

    def machines(self) -> tuple[int, ...]:
        return tuple(range(len(zoo()))) if self.zoo is None else self.zoo


@dataclass
class DemoReport:
    experiment: str
    config: dict
    rows: list[dict] = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    certificates: list = field(default_factory=list)
    valid: bool = True

    @property
    def passed(self) -> bool:
        return self.valid and bool(self.summary.get("passed", False))

    def to_json(self) -> str:
        return dumps_json(self)

    def to_csv(self) -> str:
        rows = [dict(row, kind="instance") for row in self.rows]
        rows.append(dict(self.summary, kind="summary", experiment=self.experiment, valid=self.valid))
        return dumps_csv(rows)

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return self.to_json()
        if fmt == "csv":
            return self.to_csv()
        raise ConfigError(f"unknown format {fmt!r}")


def _config_dict(config: ExperimentConfig) -> dict:
    data = dataclasses.asdict(config)
    data.pop("workers")  # parallelism must not show up in the output
    return data


def _map(fn: Callable, items: Iterable, workers: int) -> list:
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _halts(i: int) -> int:
    return int(ZooOracle().halting_step(i, 0) is not None)


def _accuracy_summary(rows: list[dict], name: str, config: ExperimentConfig) -> dict:
    constrained = [r for r in rows if r.get("constrained", True)]
    agree = sum(r["agree"] for r in constrained)
    accuracy = Fraction(agree, len(constrained)) if constrained else None
    summary = {
        "instances": len(constrained),
        "agreements": agree,
        "accuracy": accuracy,
        "passed": accuracy == 1 if constrained else True,
        "sample_size": config.sample_size(name),
        "step_budget": config.step_budget,
        "enum_budget": config.enum_budget,
    }
    if name in ACCURACY_SETTINGS:
        summary["epsilon"], summary["delta"] = ACCURACY_SETTINGS[name]
    return summary


def _degenerate(name: str, config: ExperimentConfig) -> DemoReport | None:
    if config.sample_size(name) == 0:
        return DemoReport(f"demo-{name}", _config_dict(config), summary={"passed": False, "reason": "sample size M = 0"},
                          valid=False)
    return None


# ---------------------------------------------------------------- thm2: deciding provability

def _thm2_row(config: ExperimentConfig, i: int) -> dict:
    bundle = thm2_construction(BoundedOracle(config.step_budget))
    D = bundle.distribution(i)
    decoded = majority_vote_decoder(rerm_learner(bundle), D.examples(), config.sample_size("thm2"),
                                    6 * i + 2, masses=D.masses())
    truth = _halts(i)
    return {"machine": i, "probe": 6 * i + 2, "ground_truth": truth, "decoded": decoded,
            "agree": int(decoded == truth)}


def demo_thm2(config: ExperimentConfig) -> DemoReport:
    """Majority vote at 6i+2 over all M-samples from D_i recovers whether formula i is provable."""
    bad = _degenerate("thm2", config)
    if bad:
        return bad
    rows = _map(partial(_thm2_row, config), config.machines(), config.workers)
    return DemoReport("demo-thm2", _config_dict(config), rows, _accuracy_summary(rows, "thm2", config))


# ---------------------------------------------------------------- thm3: TwoHalt

def default_twohalt_pairs() -> tuple[tuple[int, int], ...]:
    halting = [e.index for e in zoo() if e.halts]
    looping = [e.index for e in zoo() if not e.halts]
    pairs = []
    for t, (h, l) in enumerate(zip(halting, looping)):
        pairs.append((h, l) if t % 2 else (l, h))
    return tuple(pairs) + ((looping[4], looping[5]), (halting[4], halting[5]))


def _thm3_row(config: ExperimentConfig, ik: tuple[int, int]) -> dict:
    i, k = ik
    bundle = thm3_construction(BoundedOracle(config.step_budget))
    D = bundle.distribution(i, k)
    # the majority odd-number label: 1 means the first machine halts
    odd = majority_vote_decoder(rerm_learner(bundle), D.examples(), config.sample_size("thm3"), 1)
    decoded = 1 if odd == 1 else 2
    hi, hk = _halts(i), _halts(k)
    constrained = hi != hk
    truth = (1 if hi else 2) if constrained else None
    return {"machine": i, "other": k, "ground_truth": truth, "decoded": decoded,
            "constrained": constrained, "agree": int(decoded == truth) if constrained else 0,
            "case": "exactly one halts" if constrained else "unconstrained case"}


def demo_thm3_twohalt(config: ExperimentConfig) -> DemoReport:
    """TwoHalt from a proper robust learner: majority label on odd points."""
    bad = _degenerate("thm3", config)
    if bad:
        return bad
    if config.pairs is not None:
        pairs = config.pairs
    elif config.zoo is not None:
        ms = config.zoo
        pairs = tuple(zip(ms[0::2], ms[1::2]))
    else:
        pairs = default_twohalt_pairs()
    for i, k in pairs:
        if i == k:
            raise ConfigError("TwoHalt pairs need two different machines")
    rows = _map(partial(_thm3_row, config), pairs, config.workers)
    return DemoReport("demo-thm3", _config_dict(config), rows, _accuracy_summary(rows, "thm3", config))


# ---------------------------------------------------------------- thm4: exact ERM, unevaluable loss

def thm4_sample(i: int) -> list[tuple[int, int]]:
    return [(pair(i, 0), 1), (pair(i, 1), 1), (pair(i, 2), 0), (pair(i + 1, 0), 0)]


def _thm4_row(config: ExperimentConfig, i: int) -> dict:
    truth_free = thm4_construction()
    truth = thm4_construction(ZooOracle())
    S = thm4_sample(i)
    h = agnostic_rerm(truth_free, S)
    risk = robust_risk_on(truth_free, h, S)
    window = truth.members(config.param_window)
    window_min = min(robust_risk_on(truth, g, S) for g in window)
    general = truth_free.member((i, 0))
    bounded_general = robust_loss_bounded(general, pair(i, 0), 1, truth_free.perturbation, config.enum_budget)
    bounded_output = empirical_robust_risk(h, S, truth_free.perturbation, config.enum_budget)
    return {"machine": i, "ground_truth": _halts(i), "rerm_params": h.params, "rerm_risk": risk,
            "window_min_risk": window_min, "bounded_loss_general_member": bounded_general,
            "bounded_risk_of_output": bounded_output, "agree": int(risk == window_min)}


def demo_thm4(config: ExperimentConfig) -> DemoReport:
    """Exact robust ERM through the b = inf subclass where bounded loss search stays undecided."""
    rows = _map(partial(_thm4_row, config), config.machines(), config.workers)
    summary = _accuracy_summary(rows, "thm4", config)
    summary["bounded_unknown"] = sum(r["bounded_risk_of_output"] is Tri.UNKNOWN for r in rows)
    return DemoReport("demo-thm4", _config_dict(config), rows, summary)


# ---------------------------------------------------------------- thm5: halting from a proper learner

def _thm5_row(config: ExperimentConfig, i: int) -> dict:
    bundle = thm5_construction()
    x = pair(i, 0)
    S = [(x, 1)] * config.sample_size("thm5")
    outcome = weak_realizable_rerm(bundle, S, config.enum_budget)
    if isinstance(outcome, Hypothesis):
        loss = bundle.case_loss(outcome.predictor.params, x, 1)
        decision = "halts" if loss == 0 else "loops"
        params = outcome.predictor.params
    else:
        loss, decision, params = None, "loops (budget exhausted)", None
    decoded = int(decision == "halts")
    truth = _halts(i)
    return {"machine": i, "ground_truth": truth, "decision": decision, "decoded": decoded,
            "output_params": params, "robust_loss": loss, "agree": int(decoded == truth)}


def demo_thm5_halting(config: ExperimentConfig) -> DemoReport:
    """Run a proper learner on the single sample ((i,0),1)^m and read off halting."""
    bad = _degenerate("thm5", config)
    if bad:
        return bad
    rows = _map(partial(_thm5_row, config), config.machines(), config.workers)
    return DemoReport("demo-thm5", _config_dict(config), rows, _accuracy_summary(rows, "thm5", config))


# ---------------------------------------------------------------- ex1: the non-DR perturbation type

def _ex1_row(config: ExperimentConfig, i: int) -> dict:
    bundle = ex1_construction(BoundedOracle(config.step_budget))
    D = bundle.distribution(i)
    decoded = majority_vote_decoder(rerm_learner(bundle), D.examples(), config.sample_size("ex1"), None,
                                    statistic=lambda h: int(h(2 * i) == h(2 * i + 1)))
    truth = _halts(i)
    return {"machine": i, "ground_truth": truth, "decoded": decoded, "agree": int(decoded == truth)}


def demo_ex1(config: ExperimentConfig) -> DemoReport:
    """Majority of h(2i) = h(2i+1) over all M-samples decides halting."""
    bad = _degenerate("ex1", config)
    if bad:
        return bad
    rows = _map(partial(_ex1_row, config), config.machines(), config.workers)
    return DemoReport("demo-ex1", _config_dict(config), rows, _accuracy_summary(rows, "ex1", config))


DEMOS = {
    "thm2": demo_thm2,
    "thm3": demo_thm3_twohalt,
    "thm4": demo_thm4,
    "thm5": demo_thm5_halting,
    "ex1": demo_ex1,
}


# ---------------------------------------------------------------- no free lunch

def make_learner(name: str, bundle, seed: int = 7):
    if name == "const0":
        return constant_learner(0)
    if name == "const1":
        return constant_learner(1)
    if name == "erm":
        return erm_learner(bundle)
    if name == "rerm":
        return rerm_learner(bundle)
    if name == "arbitrary":
        return seeded_arbitrary_learner(seed)
    raise ConfigError(f"unknown learner {name!r}")


def default_nfl_pairs(m: int) -> tuple[tuple[int, int], ...]:
    halting = [e.index for e in zoo() if e.halts]
    if 2 * m > len(halting):
        raise ConfigError(f"the zoo has only {len(halting)} halting machines")
    return tuple((6 * i + 2, 6 * i + 4) for i in halting[: 2 * m])


def run_nfl(config: ExperimentConfig, learner_id: str | None = None) -> DemoReport:
    """The adversary's certificate for the thm2 construction and one learner."""
    learner_id = learner_id or config.learner
    Z = config.pairs if config.pairs is not None else default_nfl_pairs(config.m)
    if len(Z) % 2:
        raise ConfigError("the pair list must have even length 2m")
    m = len(Z) // 2
    bundle = thm2_construction(ZooOracle())
    cert = nfl_adversary(make_learner(learner_id, bundle, config.seed), m, Z, bundle)
    checks = [
        {"quantity": "witnessed_bound", "value": cert.witnessed_bound, "threshold": NFL_GATE,
         "agree": int(cert.witnessed_bound >= NFL_GATE)},
        {"quantity": "tail_probability", "value": cert.tail_probability, "threshold": Fraction(1, 7),
         "agree": int(cert.tail_probability >= Fraction(1, 7))},
        {"quantity": "exact_expectation", "value": cert.exact_expectation, "threshold": Fraction(1, 4),
         "agree": int(cert.exact_expectation >= Fraction(1, 4)), "constrained": False,
         "case": "reported only"},
    ]
    summary = _accuracy_summary(checks, "nfl", config)
    summary.pop("sample_size")
    summary["learner"] = learner_id
    summary["pairs"] = [list(p) for p in Z]
    return DemoReport("nfl", _config_dict(config), checks, summary, [cert])


# ---------------------------------------------------------------- dimensions

def _dims_row(config: ExperimentConfig, name: str) -> dict:
    bundle = construction(name, ZooOracle())
    window = bundle.domain_window(config.domain_window)
    size = config.domain_window if name == "ex1" else config.param_window
    members = bundle.members(size)
    vc = vc_dimension_bruteforce(members, window)
    mvc = margin_vc_bruteforce(bundle, members, window)
    robust = robust_shattering_bruteforce(bundle, members, window[: config.robust_window], 3)
    declared = bundle.declared_properties
    ok_vc = vc == declared["vc"]
    ok_mvc = declared.get("margin_vc") is None or mvc == declared["margin_vc"]
    return {"bundle": name, "vc": vc, "declared_vc": declared["vc"], "margin_vc": mvc,
            "declared_margin_vc": declared.get("margin_vc"), "robust_shattering": robust,
            "robust_window": min(config.robust_window, len(window)),
            "perturbation_representation": declared["perturbation_representation"],
            "members": len(members), "points": len(window), "agree": int(ok_vc and ok_mvc)}


def dims(config: ExperimentConfig, bundles: Iterable[str] | None = None) -> DemoReport:
    names = list(bundles) if bundles is not None else ["thm2", "thm3", "thm4", "thm5", "ex1"]
    rows = _map(partial(_dims_row, config), names, config.workers)
    summary = {"bundles": len(rows), "passed": all(r["agree"] for r in rows)}
    return DemoReport("dims", _config_dict(config), rows, summary)


def zoo_list() -> DemoReport:
    rows = []
    for e in zoo():
        behavior = f"HaltsAt({e.behavior.step},{e.behavior.output})" if e.halts else "Loops"
        rows.append({"index": e.index, "name": e.name, "behaviour": behavior, "program": to_text(e.program),
                     "agree": 1})
    return DemoReport("zoo", {}, rows, {"machines": len(rows), "passed": True,
                                        "halting": sum(e.halts for e in zoo())})


def report_dict(report: DemoReport) -> dict[str, Any]:
    from .report import to_jsonable
    return to_jsonable(report)


