"""Optimizer loop, surrogate suggestions, encoding, and trial selection."""

import functools
import json

import numpy as np
import pytest

from fairfix.metrics import UndefinedRate
from fairfix.model_zoo import (
    AlgorithmKind,
    ComponentKind,
    HyperparameterSpace,
    ParamDef,
    default_space,
    sample,
)
from fairfix.smbo import (
    BudgetExhaustedNoTrials,
    NoSuccessfulTrial,
    TrialLog,
    TrialRecord,
    best,
    decode_config,
    encode_config,
    run,
    suggest,
)


def fixture_space():
    return HyperparameterSpace(
        AlgorithmKind.LOGISTIC_REGRESSION,
        (ParamDef("x", "real", 0.0, 1.0),),
        (ComponentKind.NONE,),
    )


def parabola(cfg):
    # minimum cost at x = 0.3 when scored at beta 0
    x = cfg.params["x"]
    return 1.0 - (x - 0.3) ** 2, 0.0


class FlakyObjective:
    def __call__(self, cfg):
        if cfg.params["x"] > 0.5:
            raise UndefinedRate("rigged failure")
        return 0.9, 0.1


@functools.lru_cache(maxsize=1)
def parabola_logs():
    space = fixture_space()
    return tuple(run(parabola, space, 60, seed) for seed in range(10))


# ---------------------------------------------------------------------------
# loop structure


def test_budget_one_runs_exactly_the_default():
    log = run(parabola, fixture_space(), 1, seed=0)
    assert len(log.records) == 1
    r = log.records[0]
    assert r.proposal == "default"
    assert r.config.params == {"x": 0.5}
    assert r.status == "ok"


def test_budget_below_one_rejected():
    with pytest.raises(BudgetExhaustedNoTrials):
        run(parabola, fixture_space(), 0, seed=0)


def test_proposal_phases():
    log = run(parabola, fixture_space(), 14, seed=1)
    tags = [r.proposal for r in log.records]
    assert tags[0] == "default"
    assert tags[1:11] == ["init"] * 10
    assert all(t in ("surrogate", "random") for t in tags[11:])


def test_indices_dense_and_ordered():
    log = run(parabola, fixture_space(), 25, seed=2)
    assert [r.index for r in log.records] == list(range(25))
    with pytest.raises(ValueError):
        log.append(log.records[0])


def test_convex_fixture_finds_minimum():
    hits = 0
    for log in parabola_logs():
        r = best(log, 0.0)
        hits += abs(r.config.params["x"] - 0.3) <= 0.05
    assert hits >= 9


def test_suggestions_concentrate_over_time():
    early, late = [], []
    for log in parabola_logs():
        xs = [r.config.params["x"] for r in log.records]
        early.extend(abs(x - 0.3) for x in xs[10:30])
        late.extend(abs(x - 0.3) for x in xs[40:60])
    assert np.mean(late) < np.mean(early)


def test_running_minimum_cost_non_increasing():
    for log in parabola_logs():
        beta = 0.25
        seen = None
        for r in log.ok_records():
            c = beta * r.bias + (1 - beta) * (1 - r.accuracy)
            seen = c if seen is None else min(seen, c)
            assert seen <= c


def test_same_seed_same_log_digest():
    a = run(parabola, fixture_space(), 30, seed=7)
    b = run(parabola, fixture_space(), 30, seed=7)
    assert a.digest() == b.digest()
    c = run(parabola, fixture_space(), 30, seed=8)
    assert a.digest() != c.digest()


def test_batched_mode_dense_and_deterministic():
    a = run(parabola, fixture_space(), 9, seed=3, workers=2)
    b = run(parabola, fixture_space(), 9, seed=3, workers=2)
    assert [r.index for r in a.records] == list(range(9))
    assert a.digest() == b.digest()


def test_beta_fn_prices_each_trial():
    log = run(parabola, fixture_space(), 3, seed=0, beta_fn=lambda: 0.4)
    for r in log.records:
        assert r.beta == 0.4
        assert r.cost == pytest.approx(0.4 * r.bias + 0.6 * (1 - r.accuracy))


def test_failed_trials_recorded_not_raised():
    seen = []
    log = run(FlakyObjective(), fixture_space(), 20, seed=5, on_trial=seen.append)
    assert len(seen) == 20
    failed = [r for r in log.records if r.status == "failed"]
    assert failed, "fixture should trip at least one failure"
    for r in failed:
        assert r.cost is None and r.accuracy is None and r.bias is None
        assert r.error.startswith("UndefinedRate")
    assert best(log, 0.5).config.params["x"] <= 0.5


def test_ndjson_matches_records():
    log = run(parabola, fixture_space(), 5, seed=6)
    rows = [json.loads(line) for line in log.to_ndjson().splitlines()]
    assert [row["index"] for row in rows] == [0, 1, 2, 3, 4]
    assert all(row["config"]["algorithm"] == "logreg" for row in rows)


# ---------------------------------------------------------------------------
# suggest


def test_suggest_falls_back_to_random_when_few_trials():
    space = fixture_space()
    log = TrialLog(rng_digest="0")
    cfg = suggest(log, space, np.random.default_rng(0))
    assert 0.0 <= cfg.params["x"] <= 1.0


def test_suggestions_stay_in_domain():
    space = default_space(AlgorithmKind.RANDOM_FOREST)
    rng = np.random.default_rng(9)
    log = TrialLog(rng_digest="0")
    for i in range(12):
        cfg = sample(space, rng)
        log.append(
            TrialRecord(i, cfg, 0.8, float(rng.uniform(0, 0.3)),
                        float(rng.uniform(0.1, 0.4)), 0.3, 0.0, "ok", "init")
        )
    for _ in range(200):
        cfg = suggest(log, space, rng)
        assert cfg.component in space.components
        for p in space.params:
            assert p.contains(cfg.params[p.name])


def test_suggest_ignores_records_outside_the_space():
    # a pruned space need not contain the configuration the log started from
    full = default_space(AlgorithmKind.DECISION_TREE)
    pruned = HyperparameterSpace(
        full.algorithm,
        tuple(
            ParamDef(p.name, "cat", values=("entropy",)) if p.name == "criterion" else p
            for p in full.params
        ),
        (ComponentKind.STANDARDIZE, ComponentKind.MINMAX),
    )
    rng = np.random.default_rng(3)
    log = TrialLog(rng_digest="0")
    foreign = sample(full, np.random.default_rng(0))
    foreign = type(foreign)(foreign.algorithm, ComponentKind.NONE,
                            dict(foreign.params, criterion="gini"))
    log.append(TrialRecord(0, foreign, 0.9, 0.1, 0.2, 0.3, 0.0, "ok", "default"))
    for i in range(1, 13):
        log.append(TrialRecord(i, sample(pruned, rng), 0.8,
                               float(rng.uniform(0, 0.3)),
                               float(rng.uniform(0.1, 0.4)), 0.3, 0.0, "ok", "init"))
    for _ in range(100):
        cfg = suggest(log, pruned, rng)
        assert cfg.component in pruned.components
        assert cfg.params["criterion"] == "entropy"


# ---------------------------------------------------------------------------
# best


def fake_record(i, acc, bias):
    space = fixture_space()
    return TrialRecord(i, sample(space, np.random.default_rng(i)), acc, bias,
                       None, 0.0, 0.0, "ok", "init")


def test_best_empty_raises():
    with pytest.raises(NoSuccessfulTrial):
        best(TrialLog(rng_digest="0"), 0.5)


def test_best_rescores_at_requested_beta():
    log = TrialLog(rng_digest="0")
    log.append(fake_record(0, 0.90, 0.30))
    log.append(fake_record(1, 0.95, 0.40))
    log.append(fake_record(2, 0.85, 0.05))
    assert best(log, 0.0).index == 1  # pure accuracy
    assert best(log, 0.99).index == 2  # essentially pure fairness


def test_best_tie_goes_to_earliest():
    log = TrialLog(rng_digest="0")
    log.append(fake_record(0, 0.9, 0.2))
    log.append(fake_record(1, 0.9, 0.2))
    assert best(log, 0.5).index == 0


# ---------------------------------------------------------------------------
# encoding


def test_encode_decode_round_trip():
    rng = np.random.default_rng(13)
    for algo in AlgorithmKind:
        space = default_space(algo)
        for _ in range(2000):
            cfg = sample(space, rng)
            again = decode_config(encode_config(cfg, space), space)
            assert again.algorithm is cfg.algorithm
            assert again.component is cfg.component
            for p in space.params:
                v, w = cfg.params[p.name], again.params[p.name]
                if p.kind == "real":
                    assert w == pytest.approx(v, rel=1e-12)
                else:
                    assert w == v


def test_encoding_normalizes_numerics():
    space = default_space(AlgorithmKind.GRADIENT_BOOSTING)
    rng = np.random.default_rng(14)
    for _ in range(500):
        vec = encode_config(sample(space, rng), space)
        assert all(0.0 <= x <= 1.0 for x in vec[1:])
