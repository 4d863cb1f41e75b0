"""End-to-end repair of a biased decision tree, narrated.

The synthetic dataset plants a 0.3 selection-rate gap between groups; the
stock decision tree inherits it. The repair searches pipeline configurations
under the adaptive cost beta*bias + (1-beta)*(1-acc), where beta starts at
its lower bound and is tuned online by the greedy weight identifier.

Run: python3 demos/repair_walkthrough.py
"""

from fairfix.metrics import MetricKind
from fairfix.model_zoo import AlgorithmKind
from fairfix.repair_core import RepairConfig, repair
from fairfix.synth import biased_dataset


def main():
    ds = biased_dataset(rows=2000, disparity=0.3, seed=0)
    cfg = RepairConfig(metric=MetricKind.SPD, trials=120, seed=0)
    res = repair(ds, AlgorithmKind.DECISION_TREE, cfg)

    print(f"buggy model : acc={res.state.a1:.3f} bias={res.state.f1:.3f}")
    print(f"pseudo-model: acc={res.state.a0:.3f} (constant majority label)")
    print(f"beta lower bound L={res.state.L:.3f}")

    trace = res.beta_trace()
    moves = [(i, b) for (i, b), (_, prev) in zip(trace[1:], trace) if b != prev]
    print(f"\nbeta moved {len(moves)} times over {len(trace)} trials:")
    for i, b in moves[:8]:
        print(f"  trial {i:>3}: beta -> {b:.3f}")
    if len(moves) > 8:
        print(f"  ... {len(moves) - 8} more")
    print(f"final beta {res.state.beta:.3f}"
          f" ({'frozen' if res.state.checker else 'still adapting'})")

    ok = [r for r in res.log.records if r.status == "ok"]
    failed = len(res.log.records) - len(ok)
    print(f"\ntrials: {len(ok)} scored, {failed} failed")
    print(f"best config: {res.best_config.to_dict()}")
    print(f"\nrepaired   : acc={res.repaired.acc:.3f} bias={res.repaired.bias:.3f}")
    print(f"region against the mutation baseline: {res.region.value}")


if __name__ == "__main__":
    main()
