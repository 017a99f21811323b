"""Exception hierarchy shared by every kmspec module."""


class KMSpecError(Exception):
    """Base class; the CLI maps any subclass to a nonzero exit code."""

    code = "kmspec_error"


class NotReversible(KMSpecError):
    code = "not_reversible"


class ZeroProbabilityEdge(KMSpecError):
    code = "zero_probability_edge"


class BandwidthTooLarge(KMSpecError):
    code = "bandwidth_too_large"


class EigenFailure(KMSpecError):
    code = "eigen_failure"


class MultipleRoot(KMSpecError):
    code = "multiple_root"


class QuadratureNotConverged(KMSpecError):
    code = "quadrature_not_converged"


class PoleOnSupport(KMSpecError):
    code = "pole_on_support"


class IllConditioned(KMSpecError):
    code = "ill_conditioned"


class Breakdown(KMSpecError):
    code = "breakdown"


class NotConverged(KMSpecError):
    code = "not_converged"


class DegreeTooHigh(KMSpecError):
    code = "degree_too_high"


class SingularLeadingBand(KMSpecError):
    code = "singular_leading_band"


class OutsideDomain(KMSpecError):
    code = "outside_domain"


class ConfigInvalid(KMSpecError):
    code = "config_invalid"
