"""Error kinds raised by the lca_pego library."""


class LcaPegoError(Exception):
    """Base class for every error the library raises on purpose."""

    kind = "error"


class InvalidSpec(LcaPegoError):
    kind = "InvalidSpec"


class UnconfiguredDualGrid(InvalidSpec):
    kind = "UnconfiguredDualGrid"


class GroupMismatch(LcaPegoError):
    kind = "GroupMismatch"


class CarrierMismatch(LcaPegoError):
    kind = "CarrierMismatch"


class WrongModel(LcaPegoError):
    kind = "WrongModel"


class TooLarge(LcaPegoError):
    kind = "TooLarge"


class GeneratorUnavailable(LcaPegoError):
    kind = "GeneratorUnavailable"
