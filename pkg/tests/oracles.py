import numpy as np
from scipy import stats

from qcf.model import LinearModel, QGaussianParams, characteristic_function


def single(p: QGaussianParams):
    return characteristic_function(LinearModel(((1.0, p),)))


def oracle_cases():
    """(name, params, frozen scipy distribution) pairs with known CDFs."""
    cases = [
        ("normal", QGaussianParams(0.5, 2.0, 1.0), stats.norm(0.5, 2.0)),
        ("cauchy", QGaussianParams(0.0, 1.0, 2.0), stats.cauchy(0.0, np.sqrt(2.0))),
    ]
    for nu in (1, 2, 3, 5):
        q = (3.0 + nu) / (nu + 1.0)
        cases.append((f"t{nu}", QGaussianParams(0.0, 1.0, q), stats.t(nu, 0.0, np.sqrt(2.0 / (3.0 - q)))))
    for q in (0.0, -3.0, 0.8):
        a, th = np.sqrt(2.0 / (1.0 - q)), (2.0 - q) / (1.0 - q)
        cases.append((f"beta(q={q})", QGaussianParams(0.0, 1.0, q), stats.beta(th, th, loc=-a, scale=2 * a)))
    return cases


# acceptance lines collected during the run, printed in the terminal summary
ACCEPTANCE_LINES = []
