"""Model checker exceptions."""


class SdnmcError(Exception):
    """Base class for model checker exceptions."""


class ImproperlyConfigured(SdnmcError):
    """Configuration invalid/missing."""


class ScenarioError(SdnmcError):
    """Scenario file does not validate."""


class TopologyError(ScenarioError):
    """Topology is malformed or names an unknown switch/host."""


class BarrierScenarioRejected(ScenarioError):
    """Operation not defined for scenarios using the barrier controller."""


class NotEnabled(SdnmcError):
    """Task chosen for a macro-step is not enabled."""


class ReplayError(NotEnabled):
    """Choice in a replayed trace is not enabled at its step."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class ProtocolViolation(SdnmcError):
    """Controller/switch message exchange broke the protocol."""


class InvariantError(SdnmcError):
    """Internal model invariant does not hold."""


class InstanceTooLarge(SdnmcError):
    """Instance exceeds the size guard of an exhaustive operation."""
