"""Exception types shared across the toolkit."""


class TreepruneError(Exception):
    """Base class for all toolkit errors."""


class ParameterError(TreepruneError):
    """An argument violates an operation's preconditions."""


class CloudParseError(TreepruneError):
    """A point-cloud file failed to parse.

    Carries the offending line number (1-based) for CSV input or the byte
    offset for binary input.
    """

    def __init__(self, message, line=None, offset=None):
        super().__init__(message)
        self.line = line
        self.offset = offset


class EmptyCloudError(TreepruneError):
    """A file or operation produced a point cloud with no points."""


class NoSunError(TreepruneError):
    """No sky sample has positive solar elevation for the requested season."""


class DegenerateLightError(TreepruneError):
    """Every voxel absorbed zero light, so light fractions are undefined."""


class EmptyCutError(TreepruneError):
    """A cut specification matched no graph nodes."""


class ConsistencyError(TreepruneError):
    """A result references indices that do not exist in its source cloud."""


class InvalidCutError(TreepruneError):
    """A mesh-level cut targets the root segment or a missing segment."""


class UndefinedRecallError(TreepruneError):
    """The ground truth contains no removed points, so recall is undefined."""


class DegeneratePruneError(TreepruneError):
    """A simulated prune removed the entire tree, leaving nothing to score."""
