class NotDistinctError(ValueError):
    """The pair satisfies u ~ v, so R_u = R_v and pair invariants are undefined."""


class VerificationError(RuntimeError):
    """A numerically checked identity that must hold exactly has failed."""


class NotProductFormError(ValueError):
    """A permutation matrix is not of the form delta_{i,rho_l(j)} delta_{k,lam_j(l)}."""
