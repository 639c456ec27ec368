"""Dense symmetric linear algebra used everywhere else in the package.

All matrices are float64 numpy arrays.  Symmetric inputs are gated at a strict
asymmetry tolerance and symmetrized before any factorization so that results
do not depend on which triangle the caller filled in.
"""

import numpy as np

# Inputs whose asymmetry exceeds this are rejected rather than silently fixed.
SYMMETRY_TOL = 1e-12

# An eigenvalue above -PSD_TOL counts as nonnegative for factorization purposes.
PSD_TOL = 1e-10


def as_matrix(m, name="matrix"):
    """Coerce to a 2-D float64 array, rejecting non-finite entries."""
    a = np.asarray(m, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {a.shape}")
    if a.size == 0:
        raise ValueError(f"{name} is empty")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite entries")
    return a


def symmetric_part(m, name="matrix", tol=SYMMETRY_TOL):
    """Return (M + M^T)/2 after checking that M is square and nearly symmetric."""
    a = as_matrix(m, name)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square, got shape {a.shape}")
    asym = float(np.max(np.abs(a - a.T))) if a.size else 0.0
    if asym > tol:
        raise ValueError(
            f"{name} is not symmetric: max |M - M^T| = {asym:.3e} exceeds {tol:.1e}"
        )
    return (a + a.T) / 2.0


def sym_eigenvalues(m, name="matrix"):
    """All eigenvalues of a symmetric matrix, sorted descending."""
    s = symmetric_part(m, name)
    w = np.linalg.eigvalsh(s)
    return w[::-1].copy()


def spectral_deviation_from_identity(m, name="matrix"):
    """Spectral radius of M - I for symmetric M, i.e. max_i |lambda_i(M) - 1|."""
    s = symmetric_part(m, name)
    w = np.linalg.eigvalsh(s - np.eye(s.shape[0]))
    return float(max(abs(w[0]), abs(w[-1])))


def gram(phi):
    """Column Gram matrix Phi^T Phi, explicitly symmetrized."""
    a = as_matrix(phi, "phi")
    g = a.T @ a
    return (g + g.T) / 2.0


def cholesky_psd(b, tol=PSD_TOL, name="matrix"):
    """Factor a symmetric PSD matrix as R^T R with R upper triangular.

    Tries the ordinary Cholesky factorization first.  If that fails but every
    eigenvalue is above ``-tol``, tiny negative eigenvalues are clipped to zero
    and a triangular factor is recovered by QR-factoring the eigenvalue square
    root.  Returns ``None`` when some eigenvalue is below ``-tol``, i.e. the
    matrix is genuinely not positive semi-definite at this tolerance.

    The returned factor has a nonnegative diagonal and satisfies
    ``R.T @ R == b`` up to roundoff.
    """
    if tol < 0:
        raise ValueError(f"tolerance must be nonnegative, got {tol}")
    s = symmetric_part(b, name)
    try:
        lower = np.linalg.cholesky(s)
        return lower.T.copy()
    except np.linalg.LinAlgError:
        pass
    w, q = np.linalg.eigh(s)
    if w[0] < -tol:
        return None
    root = np.sqrt(np.clip(w, 0.0, None))[:, None] * q.T
    r = np.linalg.qr(root, mode="r")
    # qr() may return rows scaled by -1; flip them so diag(R) >= 0.
    flip = np.where(np.diag(r) < 0.0, -1.0, 1.0)
    return flip[:, None] * r
