"""Forward and inverse acoustics of a variable-radius tract."""

from tractshape.profiles import (
    PhysicalConstants,
    Potential,
    ProfileError,
    RadiusProfile,
    endpoint_data,
    gamma_constant,
    make_profile,
    potential_of,
    read_profile,
    write_profile,
)
from tractshape.impedance import (
    ImpedanceModel,
    bessel_j1,
    bessel_y1,
    struve_h1,
    z_asymptotic,
    z_eval,
)

__version__ = "0.1.0"
