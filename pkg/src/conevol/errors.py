"""Exception hierarchy shared by every module.

Each exception carries a stable ``code`` used by the CLI to map failures to
exit statuses and machine-readable error records.
"""


class ConevolError(Exception):
    code = "error"


class DegenerateInput(ConevolError):
    code = "degenerate_input"


class PointNotInterior(ConevolError):
    code = "point_not_interior"


class LpFailure(ConevolError):
    code = "lp_failure"


class NonManifold(ConevolError):
    code = "non_manifold"


class NoInsphere(ConevolError):
    code = "no_insphere"


class InadmissibleParams(ConevolError):
    code = "inadmissible_params"


class DomainError(ConevolError):
    code = "domain_error"


class ShapeMismatch(ConevolError):
    code = "shape_mismatch"


class UnsupportedFaceDim(ConevolError):
    code = "unsupported_face_dim"


class NotInscribed(ConevolError):
    code = "not_inscribed"


class NotBipyramid(ConevolError):
    code = "not_bipyramid"


class FootConditionViolated(ConevolError):
    code = "foot_condition_violated"


class UsageError(ConevolError):
    code = "usage_error"


class InvalidSpec(ConevolError):
    code = "invalid_spec"


class NoClosedForm(ConevolError):
    code = "no_closed_form"


class RetriesExhausted(ConevolError):
    code = "retries_exhausted"
