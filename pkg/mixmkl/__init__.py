"""mixmkl - generalization bounds for multiple kernel learning on mixed Markov data.

A library and command-line tool that computes the quantities entering the
bounds and checks the inequalities by Monte Carlo at desk scale.

Features:
- Exact spectral gaps, pseudo spectral gaps and mixing times of finite chains
- Pool aggregates: tau_min, gamma_aps, t_amix, A_n, B_n, Marton norms
- Simulation of mixed labelled datasets from a pool of chains
- L_q multiple kernel learning with a margin hinge loss
- Rademacher and chaos complexity estimators and bound formulas
- Verification suites for the concentration and generalization bounds
"""

# Package metadata
__version__ = "0.1.0"
__name__ = "mixmkl"
__description__ = (
    "Generalization bounds for multiple kernel learning on mixed Markov data"
)

# Package exports
from .main import main

__all__ = ["main", "__version__", "__name__", "__description__"]
