# -*- coding: utf-8 -*-

# Copyright 2026 aor_sim contributors
#  MIT License (https://opensource.org/licenses/MIT)

"""Half-ellipsoid channel geometry.

The transmitter and the receiver sit on the ground plane (z = 0) at the foci
(-D/2, 0, 0) and (+D/2, 0, 0). Scatterers of a time cluster with excess delay
``tau`` lie on the upper half of the prolate spheroid of constant total path
length ``D + c * tau``.

Both terminals share one frame: azimuth 0 points along the Tx -> Rx axis
(+x) and azimuth 90 along +y. Zenith angles are 0 straight up and 90 at the
horizon.

"""

import numpy as np

from aor_sim.antennas import wrap_angle
from aor_sim.utils import DegenerateGeometryError
from aor_sim.utils import DomainError

SPEED_OF_LIGHT = 299792458.0


class LinkGeometry(object):
    """Positions of the transmitter and the receiver."""

    def __init__(self, distance):
        """Initialize link geometry.

        Args:
            distance (float): Tx-Rx distance D in meters.

        """
        if not distance > 0:
            raise DomainError(f"Tx-Rx distance must be > 0 (got {distance}).")
        self.distance = float(distance)
        self.tx = np.array([-0.5 * distance, 0.0, 0.0])
        self.rx = np.array([0.5 * distance, 0.0, 0.0])

    @property
    def focal(self):
        """Return the focal half-distance D/2."""
        return 0.5 * self.distance


class HalfEllipsoid(object):
    """Upper half of a prolate spheroid with foci at Tx and Rx."""

    def __init__(self, a, b, focal, delay=0.0):
        """Initialize half-ellipsoid.

        Args:
            a (float): Semi-major axis along the Tx-Rx line in meters.
            b (float): Equal minor semi-axes in meters.
            focal (float): Focal half-distance in meters.
            delay (float): Excess delay in seconds that defines the ellipsoid.

        """
        assert a >= focal, f"semi-major axis {a} is shorter than the focal half-distance {focal}."
        self.a = float(a)
        self.b = float(b)
        self.focal = float(focal)
        self.delay = float(delay)

    @property
    def degenerate(self):
        """Return whether the ellipsoid has collapsed to the Tx-Rx segment."""
        return self.b == 0.0

    def surface_residual(self, points):
        """Return (x/a)^2 + (y/b)^2 + (z/b)^2 - 1 for points (..., 3)."""
        points = np.asarray(points, dtype=np.float64)
        return ((points[..., 0] / self.a) ** 2
                + (points[..., 1] / self.b) ** 2
                + (points[..., 2] / self.b) ** 2 - 1.0)


def ellipsoid_from_delay(geom, tau):
    """Build the half-ellipsoid of a time cluster.

    Args:
        geom (LinkGeometry): Link geometry.
        tau (float): Excess delay in seconds (>= 0).

    Returns:
        HalfEllipsoid: Half-ellipsoid with a = (D + c tau) / 2.

    """
    if not tau >= 0:
        raise DomainError(f"excess delay must be >= 0 (got {tau}).")
    focal = geom.focal
    a = 0.5 * (geom.distance + SPEED_OF_LIGHT * tau)
    b = np.sqrt((a - focal) * (a + focal))
    return HalfEllipsoid(a, b, focal, delay=tau)


def sample_surface_points(e, n, rng):
    """Sample points uniformly by area on the upper half-spheroid.

    Parametric angles u, v in [0, pi] are drawn uniformly and accepted with a
    probability proportional to the surface area element
    ``b sin(u) sqrt(a^2 sin^2(u) + b^2 cos^2(u))``.

    Args:
        e (HalfEllipsoid): Non-degenerate half-ellipsoid.
        n (int): Number of points.
        rng (numpy.random.Generator): Random stream.

    Returns:
        ndarray: Points (n, 3) in meters.

    """
    if e.degenerate:
        raise DegenerateGeometryError("cannot sample the degenerate direct-path ellipsoid.")
    us, vs = [], []
    remaining = n
    while remaining > 0:
        batch = 2 * remaining + 16
        u = np.pi * rng.random(batch)
        v = np.pi * rng.random(batch)
        w = rng.random(batch)
        sin_u = np.sin(u)
        element = sin_u * np.sqrt((e.a * sin_u) ** 2 + (e.b * np.cos(u)) ** 2)
        accepted = np.flatnonzero(w * e.a <= element)[:remaining]
        us.append(u[accepted])
        vs.append(v[accepted])
        remaining -= len(accepted)
    u = np.concatenate(us)
    v = np.concatenate(vs)
    sin_u = np.sin(u)

    return np.stack([e.a * np.cos(u), e.b * sin_u * np.cos(v), e.b * sin_u * np.sin(v)], axis=-1)


def sample_surface_point(e, rng):
    """Sample one point uniformly by area on the upper half-spheroid."""
    return sample_surface_points(e, 1, rng)[0]


def _angles(vectors):
    vectors = np.asarray(vectors, dtype=np.float64)
    horizontal = np.hypot(vectors[..., 0], vectors[..., 1])
    if np.any((horizontal == 0.0) & (vectors[..., 2] == 0.0)):
        raise DegenerateGeometryError("direction to a point coincident with the antenna is undefined.")
    if np.any(vectors[..., 2] < 0.0):
        raise DomainError("points must lie in the upper half-space (z >= 0).")
    theta = np.degrees(np.arctan2(horizontal, vectors[..., 2]))
    phi = np.where(horizontal == 0.0, 0.0, np.degrees(np.arctan2(vectors[..., 1], vectors[..., 0])))
    phi = wrap_angle(phi)
    if np.ndim(theta) == 0:
        return float(theta), float(phi)
    return theta, phi


def arrival_angles(p, geom):
    """Compute arrival angles of the final path leg as seen at the receiver.

    Args:
        p (ndarray): Scatterer position(s) (..., 3) in meters.
        geom (LinkGeometry): Link geometry.

    Returns:
        float or ndarray: Zenith angle(s) in [0, 90] degrees.
        float or ndarray: Azimuth(s) in [-180, 180) degrees, 0 along the Tx -> Rx axis.

    """
    return _angles(np.asarray(p, dtype=np.float64) - geom.rx)


def departure_angles(p, geom):
    """Compute departure angles of the first path leg as seen at the transmitter.

    Args:
        p (ndarray): Scatterer position(s) (..., 3) in meters.
        geom (LinkGeometry): Link geometry.

    Returns:
        float or ndarray: Zenith angle(s) in [0, 90] degrees.
        float or ndarray: Azimuth(s) in [-180, 180) degrees, 0 towards the receiver (+x).

    """
    return _angles(np.asarray(p, dtype=np.float64) - geom.tx)


def direction_from_angles(theta, phi):
    """Return unit vectors pointing along given zenith angles and azimuths.

    Args:
        theta (float or ndarray): Zenith angle(s) in degrees.
        phi (float or ndarray): Azimuth(s) in degrees.

    Returns:
        ndarray: Unit vectors (..., 3).

    """
    theta = np.radians(theta)
    phi = np.radians(phi)
    return np.stack([np.sin(theta) * np.cos(phi),
                     np.sin(theta) * np.sin(phi),
                     np.cos(theta)], axis=-1)


def path_length(p, geom):
    """Return the total Tx -> scatterer -> Rx path length in meters."""
    p = np.asarray(p, dtype=np.float64)
    return np.linalg.norm(p - geom.tx, axis=-1) + np.linalg.norm(p - geom.rx, axis=-1)
