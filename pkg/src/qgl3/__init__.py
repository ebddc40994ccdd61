"""qgl3: exact verification of the GL(3) quantum matrix group catalog.

26 solution classes, their Yang-Baxter operators, and the classical
Poincare series of the associated planes, coplanes and group algebras,
certified with exact cyclotomic-rational arithmetic.
"""

from .catalog import SolutionData, load
from .verify import VerifyConfig, verify_solution

__version__ = "0.1.0"

__all__ = ["SolutionData", "VerifyConfig", "load", "verify_solution", "__version__"]
