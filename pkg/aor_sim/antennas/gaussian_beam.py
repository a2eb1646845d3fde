# -*- coding: utf-8 -*-

# Copyright 2026 aor_sim contributors
#  MIT License (https://opensource.org/licenses/MIT)

"""Gaussian beam antenna power pattern.

The power pattern is

    g^2(theta, phi) = G exp(-(90 - theta)^2 / sigma_theta^2) exp(-wrap(phi - alpha)^2 / sigma_phi^2)

with the zenith angle ``theta`` peaking at the horizon (90 degrees) and the
boresight steered in azimuth by ``alpha``. Angles inside the exponentials are
radians. The beamwidths are tied to the half power beamwidths by
``sigma = HPBW / (2 sqrt(ln 2))`` so that the pattern is exactly -3 dB at
``+-HPBW / 2``.

"""

import copy

import numpy as np

from aor_sim.utils import DomainError

WIDEBEAM = {"gain_dbi": 15.0, "hpbw_theta": 30.0, "hpbw_phi": 28.8}
NARROWBEAM = {"gain_dbi": 24.5, "hpbw_theta": 8.6, "hpbw_phi": 10.9}


def wrap_angle(angle):
    """Wrap angles in degrees into [-180, 180).

    Values already in range are returned unchanged.

    Args:
        angle (float or ndarray): Angle(s) in degrees.

    Returns:
        float or ndarray: Wrapped angle(s).

    """
    x = np.asarray(angle, dtype=np.float64)
    outside = (x < -180.0) | (x >= 180.0)
    if np.any(outside):
        wrapped = np.mod(x + 180.0, 360.0) - 180.0
        # np.mod may round tiny negative offsets up to 360
        wrapped = np.where(wrapped >= 180.0, wrapped - 360.0, wrapped)
        x = np.where(outside, wrapped, x)
    if np.ndim(x) == 0:
        return float(x)
    return x


def hpbw_to_sigma(hpbw):
    """Convert a half power beamwidth in degrees to the Gaussian beamwidth in radians."""
    return np.radians(hpbw) / (2.0 * np.sqrt(np.log(2.0)))


def db(linear):
    """Convert linear power to dB."""
    linear = np.asarray(linear, dtype=np.float64)
    if np.any(~(linear > 0)):
        raise DomainError("linear value must be > 0 to convert to dB.")
    value = 10.0 * np.log10(linear)
    return float(value) if np.ndim(value) == 0 else value


def lin(value_db):
    """Convert dB to linear power."""
    value = 10.0 ** (np.asarray(value_db, dtype=np.float64) / 10.0)
    return float(value) if np.ndim(value) == 0 else value


class AntennaPattern(object):
    """Steerable Gaussian beam power pattern."""

    def __init__(self, gain, hpbw_theta, hpbw_phi, alpha=0.0, omnidirectional=False):
        """Initialize antenna pattern.

        Args:
            gain (float): Linear boresight gain G (> 0).
            hpbw_theta (float): Half power beamwidth in the elevation plane in degrees.
            hpbw_phi (float): Half power beamwidth in the azimuth plane in degrees.
            alpha (float): Boresight azimuth in degrees.
            omnidirectional (bool): If True, the gain is G for every direction.

        """
        if not np.isfinite(gain) or gain <= 0:
            raise DomainError(f"boresight gain must be finite and > 0 (got {gain}).")
        for name, hpbw in [("hpbw_theta", hpbw_theta), ("hpbw_phi", hpbw_phi)]:
            if not 0.0 < hpbw <= 180.0:
                raise DomainError(f"{name} must be in (0, 180] degrees (got {hpbw}).")
        if not np.isfinite(alpha):
            raise DomainError(f"alpha must be finite (got {alpha}).")
        self.G = float(gain)
        self.hpbw_theta = float(hpbw_theta)
        self.hpbw_phi = float(hpbw_phi)
        self.sigma_theta = float(hpbw_to_sigma(hpbw_theta))
        self.sigma_phi = float(hpbw_to_sigma(hpbw_phi))
        self.alpha = wrap_angle(float(alpha))
        self.omnidirectional = bool(omnidirectional)

    @property
    def gain_dbi(self):
        """Return the boresight gain in dBi."""
        return db(self.G)

    def with_alpha(self, alpha):
        """Return a copy steered to another azimuth."""
        pattern = copy.copy(self)
        pattern.alpha = wrap_angle(float(alpha))
        return pattern

    def with_hpbw(self, hpbw_theta=None, hpbw_phi=None):
        """Return a copy with other half power beamwidths."""
        return AntennaPattern(
            self.G,
            self.hpbw_theta if hpbw_theta is None else hpbw_theta,
            self.hpbw_phi if hpbw_phi is None else hpbw_phi,
            alpha=self.alpha,
            omnidirectional=self.omnidirectional,
        )

    def with_gain(self, gain):
        """Return a copy with another linear boresight gain."""
        pattern = copy.copy(self)
        if not np.isfinite(gain) or gain <= 0:
            raise DomainError(f"boresight gain must be finite and > 0 (got {gain}).")
        pattern.G = float(gain)
        return pattern

    def __repr__(self):
        """Return the string representation."""
        if self.omnidirectional:
            return f"AntennaPattern(omnidirectional, G={self.G:.4g})"
        return (f"AntennaPattern(G={self.gain_dbi:.2f} dBi, hpbw_theta={self.hpbw_theta:g}, "
                f"hpbw_phi={self.hpbw_phi:g}, alpha={self.alpha:g})")


def make_pattern(gain_dbi, hpbw_theta, hpbw_phi, alpha=0.0):
    """Make a Gaussian beam pattern from datasheet parameters.

    Args:
        gain_dbi (float): Boresight gain in dBi.
        hpbw_theta (float): Elevation half power beamwidth in degrees.
        hpbw_phi (float): Azimuth half power beamwidth in degrees.
        alpha (float): Boresight azimuth in degrees.

    Returns:
        AntennaPattern: Antenna pattern.

    """
    if not np.isfinite(gain_dbi):
        raise DomainError(f"gain must be finite (got {gain_dbi}).")
    return AntennaPattern(lin(gain_dbi), hpbw_theta, hpbw_phi, alpha=alpha)


def make_omnidirectional(gain_dbi=0.0):
    """Make an isotropic pattern with constant gain."""
    return AntennaPattern(lin(gain_dbi), 180.0, 180.0, alpha=0.0, omnidirectional=True)


def pattern_from_config(params):
    """Make a pattern from a config block.

    Args:
        params (dict): Keys gain_dbi, hpbw_theta, hpbw_phi, alpha and omnidirectional.

    Returns:
        AntennaPattern: Antenna pattern.

    """
    if params.get("omnidirectional", False):
        return make_omnidirectional(params.get("gain_dbi", 0.0))
    return make_pattern(params["gain_dbi"], params["hpbw_theta"], params["hpbw_phi"],
                        params.get("alpha", 0.0))


def gain(pattern, theta, phi):
    """Evaluate the linear power gain.

    Args:
        pattern (AntennaPattern): Antenna pattern.
        theta (float or ndarray): Zenith angle(s) in degrees within [0, 90].
        phi (float or ndarray): Azimuth angle(s) in degrees.

    Returns:
        float or ndarray: Linear power gain in (0, G].

    """
    theta = np.asarray(theta, dtype=np.float64)
    phi = np.asarray(phi, dtype=np.float64)
    if np.any(~((theta >= 0.0) & (theta <= 90.0))):
        raise DomainError("theta must be within [0, 90] degrees.")
    if pattern.omnidirectional:
        value = np.full(np.broadcast(theta, phi).shape, pattern.G)
    else:
        d_theta = np.radians(90.0 - theta) / pattern.sigma_theta
        d_phi = np.radians(wrap_angle(phi - pattern.alpha)) / pattern.sigma_phi
        value = pattern.G * np.exp(-d_theta ** 2) * np.exp(-d_phi ** 2)
    return float(value) if np.ndim(value) == 0 else value
