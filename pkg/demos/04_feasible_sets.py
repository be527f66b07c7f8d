"""The feasible set zoo: linear oracles, projections, and curvature.

Every learner here only ever touches the feasible set through a linear
minimisation oracle (and, for baselines, a projection).  This script walks
through each built-in set: where the oracle lands for a sample gradient,
what projecting an outside point does, and the two constants the theory
consumes, the diameter D and the strong-convexity modulus alpha of the set.
"""

import numpy as np

from ofwkit.sets import L1Ball, L2Ball, LpBall, Simplex


def describe(name, dom, g, outside):
    v = dom.lmo(g)
    p = dom.project(outside)
    alpha = dom.strong_convexity
    print(name)
    print(f"  lmo({np.array2string(g, precision=2)}) = {np.array2string(v, precision=4)}")
    print(f"  <g, lmo(g)> = {float(g @ v):.4f}")
    print(f"  project({np.array2string(outside, precision=2)}) = {np.array2string(p, precision=4)}")
    print(f"  contains(projection) = {dom.contains(p)}")
    alpha_text = f"{alpha:.4f}" if alpha > 0 else "0 (not strongly convex)"
    print(f"  diameter D = {dom.diameter:.4f}, modulus alpha = {alpha_text}")
    print()


def main():
    g = np.array([3.0, -4.0, 0.0])
    outside = np.array([2.0, 2.0, -1.0])

    describe("euclidean ball, radius 1", L2Ball(3, 1.0), g, outside)
    describe("l_p ball, p = 1.5, radius 1", LpBall(3, 1.0, 1.5), g, outside)
    describe("l_1 ball, radius 2", L1Ball(3, 2.0), g, outside)
    describe("probability simplex", Simplex(3), g, outside)

    print("strongly convex sets (euclidean and l_p balls) reward the learner:")
    print("the oracle step contracts the surrogate gap geometrically far from")
    print("the optimum, which is what buys the sqrt(T) regret rate there.")


if __name__ == "__main__":
    main()
