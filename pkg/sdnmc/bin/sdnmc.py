"""The :program:`sdnmc` command.

.. program:: sdnmc

.. code-block:: console

    $ sdnmc lb_buggy_1pkt
    $ sdnmc ssh_buggy --mode property --trace-out trace.jsonl
    $ sdnmc lb_buggy_1pkt --crosscheck
"""
import logging

import click

from sdnmc import __version__
from sdnmc.app import Checker
from sdnmc.explore.base import MODES
from sdnmc.explore.independence import LEVELS
from sdnmc.exceptions import SdnmcError
from sdnmc.report import (
    render_crosscheck, render_json, render_text, write_traces,
)

__all__ = ['main', 'run']

EX_OK, EX_VIOLATION, EX_ERROR = 0, 1, 2

LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL')


def _config(parallel=None, explorer=None):
    config = {}
    if parallel is not None:
        config['SDNMC_PARALLEL'] = parallel
        if parallel > 1 and explorer is None:
            explorer = 'pool'
    if explorer is not None:
        config['SDNMC_EXPLORER'] = explorer
    return config


def run(scenario, mode=None, independence=None, max_depth=None,
        barriers=None, trace_out=None, parallel=None, explorer=None,
        crosscheck=False, as_json=False, echo=click.echo):
    # type: (str, str, str, int, str, IO, int, str, bool, bool, Callable) -> int
    """Check one scenario and print the report.

    Returns:
        int: exit status, 0 if nothing was found, 1 on a violation or
            a cross-check mismatch.
    """
    app = Checker(config=_config(parallel, explorer))
    sc = app.load_scenario(scenario)
    if crosscheck:
        report = app.crosscheck(sc)
        echo(render_crosscheck(report, as_json=as_json))
        return EX_OK if report.matched else EX_VIOLATION
    if barriers is not None:
        barriers = barriers == 'on'
    options = app.options(
        sc, mode=mode, independence=independence, max_depth=max_depth)
    result = app.check(
        sc, barriers=barriers,
        mode=mode, independence=independence, max_depth=max_depth)
    render = render_json if as_json else render_text
    echo(render(result, sc, options,
                max_states=app.settings.SDNMC_REPORT_MAX_STATES))
    if trace_out is not None:
        write_traces(trace_out, result)
    return EX_VIOLATION if result.violations else EX_OK


@click.command(context_settings={'help_option_names': ['-h', '--help']})
@click.argument('scenario', required=False)
@click.option('--mode', type=click.Choice(MODES, case_sensitive=False),
              help='Explore everything, or stop at the first violation.')
@click.option('--independence',
              type=click.Choice(LEVELS, case_sensitive=False),
              help='Precision of the independence relation.')
@click.option('--max-depth', type=click.IntRange(min=1),
              help='Maximum number of steps per execution.')
@click.option('--barriers', type=click.Choice(('on', 'off')),
              help="Override the scenario's barrier setting.")
@click.option('--trace-out', type=click.File('w'),
              help='Write counterexample traces, one JSON event per line.')
@click.option('--parallel', type=click.IntRange(min=1),
              help='Explore branches with this many worker processes.')
@click.option('--explorer', type=click.Choice(sorted(Checker.explorers)),
              help='Explorer backend.')
@click.option('--crosscheck', is_flag=True,
              help='Compare against the reference semantics instead.')
@click.option('--json', 'as_json', is_flag=True,
              help='Machine-readable report.')
@click.option('--list', 'list_scenarios', is_flag=True,
              help='List bundled scenarios and exit.')
@click.option('-l', '--loglevel', default='WARNING',
              type=click.Choice(LOG_LEVELS, case_sensitive=False),
              show_default=True)
@click.version_option(__version__, prog_name='sdnmc')
@click.pass_context
def main(ctx, scenario, list_scenarios, loglevel, **kwargs):
    """Model check the SDN scenario SCENARIO.

    SCENARIO is a path to a scenario file or the name of a bundled
    scenario.  Exits with status 1 when a violation is found and 2 on
    errors.
    """
    logging.basicConfig(level=getattr(logging, loglevel.upper()))
    if list_scenarios:
        for name in Checker(set_as_current=False).ScenarioFile.list_bundled():
            click.echo(name)
        ctx.exit(EX_OK)
    if scenario is None:
        raise click.UsageError('Missing argument SCENARIO.')
    try:
        status = run(scenario, **kwargs)
    except SdnmcError as exc:
        click.echo('sdnmc: error: {0}'.format(exc), err=True)
        status = EX_ERROR
    ctx.exit(status)


if __name__ == '__main__':  # pragma: no cover
    main()
