"""Projection-free online learning with an exact line search.

Runs the line-search learner on the unit euclidean ball against adversarial
unit-norm linear losses and prints the regret trajectory next to its
theoretical ceiling.  The closing sweep fits a log-log growth slope: the
ceiling grows like T^(2/3), the observed curve is usually much flatter.
"""

from ofwkit.harness import ALGO_OFW_LS, ExperimentSpec, run_experiment, sweep
from ofwkit.losses import LINEAR, LossSpec
from ofwkit.sets import L2Ball


def main():
    domain = L2Ball(10, 1.0)
    spec = ExperimentSpec(
        domain=domain,
        loss=LossSpec(kind=LINEAR, dim=10, seed=7, G=1.0),
        algo=ALGO_OFW_LS,
        horizon=512,
    )
    trace = run_experiment(spec)

    print("line-search learner on the unit ball, unit-norm linear losses")
    print(f"{'t':>6} {'regret':>12} {'bound':>12} {'ratio':>8}")
    for t in (1, 2, 4, 8, 16, 32, 64, 128, 256, 512):
        r = trace.regret[t - 1]
        b = trace.theorem_bound[t - 1]
        print(f"{t:>6} {r:>12.4f} {b:>12.2f} {r / b:>8.5f}")
    print(f"final regret {trace.final_regret:.4f} vs bound {trace.final_bound:.2f}")

    horizons = tuple(2**k for k in range(8, 13))
    result = sweep(spec, horizons)
    pairs = ", ".join(f"R({T})={r:.2f}" for T, r in zip(horizons, result.regrets))
    print(f"sweep: {pairs}")
    print(f"fitted log-log slope {result.slope:.3f} (ceiling slope is 2/3 = {2 / 3:.3f})")


if __name__ == "__main__":
    main()
