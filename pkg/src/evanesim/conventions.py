"""Sign and normalization conventions shared by every module.

Time dependence is ``exp(-i*omega*t)``; a forward wave in a layer is
``A*exp(+i*kz*(z - z0))`` with ``z0`` the left edge of that layer.  With this
choice a positive phase slope ``d(arg t)/d(omega)`` is a delay.

Evanescent wavenumbers are stored on the decaying branch, ``kz = i*kappa`` with
``kappa > 0``.

Transfer matrices map the (forward, backward) amplitude pair on the left of an
element to the pair on its right.  For a stack illuminated from the left,
``(t, 0) = M @ (1, r)`` so ``r = -m21/m22`` and ``t = det(M)/m22``.

Amplitudes are those of the continuous scalar field: E_y for TE, H_y for TM,
acoustic pressure, and the Schroedinger wavefunction.  The continuous flux
derivative is ``(1/w) du/dz`` with weight ``w`` = 1 (TE), n**2 (TM), mass
density (acoustic), particle mass (quantum).  The interface admittance is
``q = kz / w`` and power transmission is ``Re(q_exit)/Re(q_entry) * |t|**2``.

numpy's FFT pairs positive-frequency bins with ``exp(+i*2*pi*f*t)``, the
conjugate of the physics convention above, so channel responses are applied
to FFT bins as ``conj(H)``.
"""

import hashlib

from scipy import constants

SPEED_OF_LIGHT = constants.c
HBAR = constants.hbar

TIME_CONVENTION = "exp(-i omega t)"
SPATIAL_CONVENTION = "exp(+i kz z), Im(kz) >= 0"
MATRIX_CONVENTION = "(A,B)_right = M (A,B)_left; r = -m21/m22; t = det/m22"
FLUX_CONVENTION = "q = kz/w; w = 1 TE, n^2 TM, rho acoustic, m quantum"


def convention_hash() -> str:
    """Short digest of the convention strings, recorded in output provenance."""
    text = "\n".join(
        [TIME_CONVENTION, SPATIAL_CONVENTION, MATRIX_CONVENTION, FLUX_CONVENTION]
    )
    return hashlib.sha256(text.encode()).hexdigest()[:16]
