"""Report rendering and trace streams."""
from .utils.json import dumps
from .utils.log import get_logger

__all__ = [
    'render_text', 'render_json', 'render_crosscheck', 'write_traces',
]

logger = get_logger(__name__)

MATCH, MISMATCH = 'MATCH', 'MISMATCH'


def _finals(result, max_states):
    for fingerprint in sorted(result.finals)[:max_states]:
        yield fingerprint, result.finals[fingerprint]


def render_text(result, scenario=None, options=None, max_states=20):
    # type: (ExplorationResult, ScenarioFile, ExplorationOptions, int) -> str
    """Human-readable report of an exploration.

    Everything but the ``Time`` line is the same for the same scenario
    and options.
    """
    lines = []
    if scenario is not None:
        lines.append('Scenario: {0}'.format(scenario.name))
    if options is not None:
        lines.append('Mode: {0}  Independence: {1}  Max depth: {2}'.format(
            options.mode, options.independence, options.max_depth))
    lines.extend([
        'Execs: {0}'.format(result.executions),
        'States: {0}'.format(result.states),
        'Deadlocks: {0}'.format(result.deadlocks),
        'Truncated: {0}'.format(result.truncated),
        'Time: {0:.3f}s'.format(result.elapsed),
    ])
    if result.commutation_checks:
        lines.append('Commutation checks: {0} ({1} failed)'.format(
            result.commutation_checks, len(result.commutation_failures)))
    lines.append('Violations: {0}'.format(len(result.violations)))
    for n, (violation, trace) in enumerate(result.violations, 1):
        lines.append('  [{0}] {1} at {2}: {3}'.format(
            n, violation.property, violation.location, violation.message))
        lines.extend('      ' + str(event) for event in trace)
    lines.append('Final states: {0}'.format(len(result.finals)))
    for fingerprint, summary in _finals(result, max_states):
        lines.append('  {0}'.format(fingerprint[:12]))
        for actor in summary:
            lines.append('    {0} {1}: {2}'.format(
                actor['id'], actor['kind'], ', '.join(
                    '{0}={1}'.format(k, v)
                    for k, v in sorted(actor['fields'].items()))))
    if len(result.finals) > max_states:
        lines.append('  ... {0} more'.format(len(result.finals) - max_states))
    return '\n'.join(lines)


def render_json(result, scenario=None, options=None, max_states=20):
    # type: (ExplorationResult, ScenarioFile, ExplorationOptions, int) -> str
    d = result.as_dict()
    d['finals'] = dict(_finals(result, max_states))
    if scenario is not None:
        d['scenario'] = scenario.name
    if options is not None:
        d['options'] = options.as_dict()
    return dumps(d, indent=2, sort_keys=True)


def render_crosscheck(report, as_json=False):
    # type: (CrosscheckReport, bool) -> str
    status = MATCH if report.matched else MISMATCH
    if as_json:
        return dumps(dict(report._asdict(), status=status),
                     indent=2, sort_keys=True)
    return '\n'.join([
        'Scenario: {0}'.format(report.scenario),
        'Step bound: {0}'.format(report.step_bound),
        'Oracle finals: {0}{1}'.format(
            report.oracle_finals,
            ' (bound reached)' if report.oracle_exhausted else ''),
        'Actor finals: {0}{1}'.format(
            report.actor_finals,
            ' ({0} truncated)'.format(report.actor_truncated)
            if report.actor_truncated else ''),
        'Unmatched: {0} oracle, {1} actor'.format(
            report.unmatched_oracle, report.unmatched_actor),
        status,
    ])


def write_traces(fh, result):
    # type: (IO, ExplorationResult) -> int
    """Write every counterexample as one JSON object per line.

    A header line carrying the violation precedes the events of its
    trace.

    Returns:
        int: number of lines written.
    """
    written = 0
    for n, (violation, trace) in enumerate(result.violations):
        fh.write(dumps({
            'counterexample': n, 'violation': list(violation),
            'steps': len(trace)}, sort_keys=True) + '\n')
        written += 1
        for event in trace:
            fh.write(dumps(dict(event.as_dict(), counterexample=n),
                           sort_keys=True) + '\n')
            written += 1
    logger.debug('wrote %d trace lines', written)
    return written
