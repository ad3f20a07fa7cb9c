"""Two losing quantum games combine into a winner.

Game A is a uniform quarter-turn coin; game B is a site-dependent coin whose
rotation angle tanh-interpolates from -pi/8 (far left) to pi/4 (far right).
Each alone drifts the walker left (losing). Played as "A twice then B once"
(or twice) within each step, the drift reverses sign and grows linearly.
"""

import numpy as np

from parrondoqw import (
    SPIN_DOWN,
    Composite,
    LatticeGeometry,
    Single,
    SiteTanhRotation,
    UniformRotation,
    WalkerState,
    run,
)

coin_a = UniformRotation(np.pi / 2)
coin_b = SiteTanhRotation(-np.pi / 8, np.pi / 4)
initial = WalkerState.localized(LatticeGeometry(801), SPIN_DOWN, 0)

games = {
    "A alone": Single(coin_a),
    "B alone": Single(coin_b),
    "A then B (1,1)": Composite(coin_a, coin_b, 1, 1),
    "A,A then B (2,1)": Composite(coin_a, coin_b, 2, 1),
    "A,A then B,B (2,2)": Composite(coin_a, coin_b, 2, 2),
}

print("final position expectation after 400 steps (winning = positive drift)")
print()
print(f"{'game':20s} {'<X>(100)':>10s} {'<X>(200)':>10s} {'<X>(400)':>10s}  verdict")
for name, schedule in games.items():
    traj = run(initial, schedule, 400)
    e = traj.expectation
    verdict = "WINNING" if e[-1] > 0 else "losing"
    print(f"{name:20s} {e[100]:10.2f} {e[200]:10.2f} {e[400]:10.2f}  {verdict}")

print()
print("the (2,1) and (2,2) composites win although every ingredient loses:")
print("two rotations by pi/2 plus the small site-dependent angle land near a")
print("full spin flip, which steers amplitude toward positive x each step.")
