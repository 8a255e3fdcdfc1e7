"""Scenario Validators."""
from .exceptions import ScenarioError

__all__ = [
    'ensure_policy', 'ensure_property', 'ensure_injection_mode',
    'limit_packets', 'serialize_validator', 'deserialize_validator',
]

validators = {}


def validator(fun):
    # type: (Callable) -> Callable
    """Make validator json serializable."""
    validators[fun.__name__] = fun
    return fun


def serialize_validator(v):
    # type: (Callable) -> Tuple[str, List]
    return (v._validator, v._args)


def deserialize_validator(v):
    # type: (Union[List, Tuple[str, List]]) -> Callable
    if isinstance(v, (list, tuple)):
        name, args = v
        return validators[name](*args)
    return v


def _mark(fun, name, args):
    fun._validator = name
    fun._args = args
    return fun


@validator
def ensure_policy(*allowed):
    # type: (*str) -> Callable
    """Only allow scenarios using one of the given policy families.

    Example:
        >>> ensure_policy('LB', 'LBB')
    """
    allowed = tuple(a.upper() for a in allowed)

    def validate_policy(scenario):
        # type: (ScenarioFile) -> None
        family = scenario.controller.get('policy', '').upper()
        if family not in allowed:
            raise ScenarioError(
                'Unknown policy family {0!r} ({1} only)'.format(
                    family, ', '.join(allowed)))
    return _mark(validate_policy, 'ensure_policy', allowed)


@validator
def ensure_property(*allowed):
    # type: (*str) -> Callable
    """Validator that ensures every requested monitor is known."""
    allowed = tuple(allowed)

    def validate_property(scenario):
        # type: (ScenarioFile) -> None
        for name in scenario.properties:
            if name not in allowed:
                raise ScenarioError(
                    'Unknown property {0!r} ({1} only)'.format(
                        name, ', '.join(allowed)))
    return _mark(validate_property, 'ensure_property', allowed)


@validator
def ensure_injection_mode(*allowed):
    # type: (*str) -> Callable
    """Validator that ensures the injection discipline is known."""
    allowed = tuple(allowed)

    def validate_injection_mode(scenario):
        # type: (ScenarioFile) -> None
        if scenario.injection not in allowed:
            raise ScenarioError(
                'Injection mode {0!r} not allowed ({1} only)'.format(
                    scenario.injection, ', '.join(allowed)))
    return _mark(validate_injection_mode, 'ensure_injection_mode', allowed)


@validator
def limit_packets(limit):
    # type: (int) -> Callable
    """Block scenarios injecting more than ``limit`` packets in total.

    Example:
        >>> limit_packets(300)
    """
    limit = int(limit)

    def validate_packet_count(scenario):
        # type: (ScenarioFile) -> None
        total = sum(i.count for i in scenario.injections)
        if total > limit:
            raise ScenarioError(
                'Scenario injects {0} packets (limit is {1})'.format(
                    total, limit))
    return _mark(validate_packet_count, 'limit_packets', (limit,))
