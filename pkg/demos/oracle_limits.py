"""Show the oracle psi sharpening into the null indicator as the speed grows."""
import numpy as np

from nullprop.kernels import BoundedNull, psi_bounded_ls

null = BoundedNull(-1.0, 2.0)
grid = np.array([-2.0, -1.0, 0.0, 0.5, 1.9, 2.0, 3.0])
print("t      " + " ".join(f"{g:>7.2f}" for g in grid))
for t in (1.0, 5.0, 25.0, 125.0):
    psi = psi_bounded_ls(t, grid, null)
    print(f"{t:<6g} " + " ".join(f"{v:>7.3f}" for v in psi))
