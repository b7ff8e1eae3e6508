"""Quantitative three-body model of straight ionization tracks.

A spherically emitted projectile interacting weakly with two fixed hydrogen
atoms is expanded in a Born series; the far-field angular power of the
double-excitation channel concentrates on geometries where the source and
both atoms are collinear. Subpackages: ``atomic`` (states and transition
potentials), ``waves`` (sources, Green function, kinematics), ``cubature`` /
``spherical`` / ``oscillatory`` (quadrature machinery), ``perturbation``
(Born-series fields and powers), ``experiments`` (scans, validation, CLI).
"""

from .atomic import (
    AtomState,
    RadialPotential,
    eigenstate,
    evaluate_potential,
    transition_potential,
)
from .cubature import AccuracyError, CubatureResult, CubatureSpec, integrate_ball
from .oscillatory import radial_fourier, stationary_direction
from .perturbation import (
    AngularField,
    ChannelField,
    ExcitationPower,
    cone_half_width,
    double_excitation_probability,
    far_field_amplitude,
    first_order_far_amplitude,
    first_order_field,
    plane_wave_double_excitation,
    second_order_source,
)
from .spherical import DirectionGrid, build_direction_grid
from .waves import (
    ALPHA_PARTICLE_MASS,
    Channel,
    ClosedChannelError,
    Geometry,
    Kinematics,
    Source,
    channel_wavenumber,
    outgoing_green,
    source_value,
)

__version__ = "0.1.0"
