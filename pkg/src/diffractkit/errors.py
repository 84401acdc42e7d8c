"""Exception types raised across the package."""


class DiffractkitError(Exception):
    """Base class for all package errors."""


class RegionUnderflow(DiffractkitError):
    """An operation needed atoms outside the region a comb was generated on."""


class SupportUnderflow(DiffractkitError):
    """An autocorrelation was truncated below the radius a caller asked for."""


class NotUniformlyDiscrete(DiffractkitError):
    """A pair sweep was requested on a comb without a discreteness radius."""


class DegenerateBasis(DiffractkitError):
    """A cut-and-project basis has (numerically) vanishing determinant."""


class NotALatticePoint(DiffractkitError):
    """A physical coordinate does not belong to the projected lattice."""


class UnknownFixture(DiffractkitError):
    """No fixture is registered under the requested name."""


class ConfigError(DiffractkitError):
    """Malformed experiment configuration.

    ``lineno`` is the 1-based line of the offending entry when it is known.
    """

    def __init__(self, message, lineno=None, path=None):
        self.lineno = lineno
        self.path = path
        where = ""
        if path is not None:
            where = f"{path}:"
        if lineno is not None:
            where += f"{lineno}:"
        super().__init__(f"{where} {message}" if where else message)
