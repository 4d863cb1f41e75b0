"""Tour of the four group-fairness metrics on a tiny hand-checkable table.

Run: python3 demos/metrics_tour.py
"""

import numpy as np

from fairfix.metrics import MetricKind, bias_value, group_counts, raw_metric

# 12 people: z=0 is the unprivileged group, y the true label, yhat the model
y    = np.array([1, 1, 0, 0, 1, 0, 1, 1, 0, 1, 0, 0])
yhat = np.array([1, 0, 0, 0, 1, 1, 1, 1, 0, 1, 1, 0])
z    = np.array([0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1])


def main():
    c = group_counts(y, yhat, z)
    print("selection rate  z=0:", c.rate(0), " z=1:", c.rate(1))
    print("true pos rate   z=0:", round(c.tpr(0), 3), " z=1:", round(c.tpr(1), 3))
    print()
    for kind in MetricKind:
        raw = raw_metric(kind, c)
        score = bias_value(kind, y, yhat, z)
        print(f"{kind.value:>4}  raw = {raw!r:>22}  bias score = {score:.4f}")
    print()
    print("a bias score of 0 means perfectly fair; DI folds through |ln .|")
    print("so that ratios 0.8 and 1.25 score the same distance from 1.")


if __name__ == "__main__":
    main()
