"""
Crossing the Hopf point
=======================

Integrate the alpha = delta model on both sides of alpha_H = 1.5 and let the
classifier decide between a stable focus and a limit cycle.
"""

# %%
from ideawaves import Params, simulate
from ideawaves.integrator import detect_asymptotics, hopf_sweep

beta, xi = 0.5, 0.4

# %%
for entry in hopf_sweep(beta, xi, [1.0, 1.25, 1.4, 1.45, 1.55, 1.6, 1.75, 2.0]):
    v = entry.verdict
    if entry.kind == "cycle":
        print(f"alpha={entry.alpha:<5} cycle  period {v.period:6.2f}  amplitude of I {v.amplitude_i:.3f}")
    else:
        print(f"alpha={entry.alpha:<5} {entry.kind}")

# %% [markdown]
# Close to the crossing the spiral decays very slowly. A horizon of 1000
# time units is not enough to call it at alpha = 1.45.

# %%
p = Params(beta, xi, 1.45, 1.45)
for t_end in (1000.0, 10000.0):
    traj = simulate(p, t_end=t_end, dt=0.01, sample_stride=10)
    print(t_end, detect_asymptotics(traj, p))

# %%
try:
    from ideawaves.plots import trajectory_svg

    trajectory_svg(simulate(Params(beta, xi, 1.75, 1.75), t_end=300.0, dt=0.01, sample_stride=10), "cycle.svg")
    print("wrote cycle.svg")
except ImportError:
    print("matplotlib not installed; skipping the figure")
