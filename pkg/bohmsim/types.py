from __future__ import annotations

from typing import Union

import numpy as np
import numpy.typing as npt

FloatOrArray = Union[float, npt.NDArray[np.float64]]
ComplexOrArray = Union[complex, npt.NDArray[np.complex128]]
