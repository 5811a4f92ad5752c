"""
Command-line application for inertial parameter identification

    python app.py simulate --scenario rich --out data/rich.csv
    python app.py identify --in data/rich.csv --method manifold --out data/rich.result
    python app.py check --params data/rich.result
    python app.py table1
    python app.py experiment
"""
import os
import sys
from functools import wraps

import click
import numpy as np
import pandas as pd
from dotenv import load_dotenv

from config import config
from harness import dataset_io, fixtures, trajectory
from inertia.consistency import check_full_physical
from inertia.errors import IdentificationError
from inertia.inertial_params import PARAM_NAMES, InertialParams, ThetaParams, params_from_theta
from inertia.manifold_opt import SolverConfig, initial_guess, solve_linear, solve_manifold
from inertia.regressor import analyse_excitation, stack
from inertia.spatial_algebra import so3_exp
from utils.logger import setup_logging, log_error, log_activity
from utils.validators import (
    METHODS, ValidationError, validate_nonnegative, validate_positive, validate_solver_config,
    validate_tolerance, validate_values, validate_vector,
)

# Load environment variables
load_dotenv()

EXIT_FAILURE = 1
EXIT_NOT_CONSISTENT = 2


def create_app(config_name=None):
    """Select the configuration and set up logging"""
    if config_name is None:
        config_name = os.environ.get('IDENTIFICATION_ENV', 'development')
    if config_name not in config:
        raise ValidationError(f"Unknown environment {config_name!r}. Must be one of: {', '.join(config)}")

    settings = config[config_name]
    setup_logging(settings)
    return settings


# Error handling decorator
def handle_errors(f):
    """Decorator to report failures and exit with status 1"""

    @wraps(f)
    def decorated_function(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except ValidationError as e:
            click.echo(f'Validation Error: {str(e)}', err=True)
            log_error(e, 'Validation error', command=f.__name__)
        except IdentificationError as e:
            click.echo(f'Error: {str(e)}', err=True)
            log_error(e, type(e).__name__, command=f.__name__)
        except OSError as e:
            click.echo(f'I/O Error: {str(e)}', err=True)
            log_error(e, 'I/O error', command=f.__name__)
        except Exception as e:
            click.echo('An unexpected error occurred.', err=True)
            log_error(e, 'Unexpected error', command=f.__name__)
        sys.exit(EXIT_FAILURE)

    return decorated_function


def params_from_options(mass, com, inertia, theta):
    """Ground-truth parameters from --mass/--com/--inertia or --theta"""
    if theta:
        m, cx, cy, cz, wx, wy, wz, Lx, Ly, Lz = validate_vector(theta, 10, 'theta')
        try:
            return params_from_theta(ThetaParams(m, [cx, cy, cz], so3_exp([wx, wy, wz]), [Lx, Ly, Lz]))
        except IdentificationError as exc:
            raise ValidationError(f"theta: {exc}")
    if mass is None or com is None or inertia is None:
        raise ValidationError("give either --theta or all of --mass, --com and --inertia")
    c = np.array(validate_vector(com, 3, 'com'))
    return InertialParams(mass, mass * c, validate_vector(inertia, 6, 'inertia'))


def _consistency_fields(report):
    return {f'consistency_{key}': value for key, value in report.as_dict().items()}


@click.group()
@click.option('--env', 'env_name', type=click.Choice(sorted(config)), default=None,
              help='Configuration to use (default: $IDENTIFICATION_ENV or development).')
@click.pass_context
def cli(ctx, env_name):
    """Identify rigid-body inertial parameters with physical consistency checks."""
    ctx.obj = create_app(env_name)


@cli.command()
@click.option('--scenario', type=click.Choice(['rich', 'poor']), default=None,
              help='Shipped scenario instead of explicit parameters.')
@click.option('--mass', type=float, default=None, help='Mass in kg.')
@click.option('--com', default=None, help='Center of mass "cx,cy,cz" in m.')
@click.option('--inertia', default=None, help='Body-frame inertia "xx,xy,xz,yy,yz,zz" in kg m^2.')
@click.option('--theta', default=None, help='"m,cx,cy,cz,wx,wy,wz,Lx,Ly,Lz" (w: rotation vector of Q).')
@click.option('--segment-time', type=float, default=None, help='Waypoint-to-waypoint time in s.')
@click.option('--duration', type=float, default=None, help='Dataset length in s.')
@click.option('--rate', type=float, default=None, help='Sample rate in Hz.')
@click.option('--noise-f', type=float, default=0.0, show_default=True, help='Force noise std in N.')
@click.option('--noise-mu', type=float, default=0.0, show_default=True, help='Moment noise std in N m.')
@click.option('--seed', type=int, default=None, help='Trajectory and noise seed.')
@click.option('--out', 'out_path', required=True, type=click.Path(dir_okay=False), help='Dataset CSV to write.')
@click.pass_obj
@handle_errors
def simulate(settings, scenario, mass, com, inertia, theta, segment_time, duration, rate,
             noise_f, noise_mu, seed, out_path):
    """Generate a synthetic dataset and its ground-truth sidecar."""
    seed = settings.SEED if seed is None else seed
    if scenario == 'rich':
        dataset = trajectory.rich_excitation_scenario(seed)
    elif scenario == 'poor':
        dataset = trajectory.poor_excitation_scenario(seed)
    else:
        segment_time = settings.SEGMENT_TIME if segment_time is None else segment_time
        duration = settings.DURATION if duration is None else duration
        rate = settings.SAMPLE_RATE if rate is None else rate
        traj = trajectory.TrajectoryConfig(
            segment_time=validate_positive(segment_time, 'segment-time'),
            duration=validate_nonnegative(duration, 'duration'),
            rate=validate_positive(rate, 'rate'),
            orientation_spread=settings.ORIENTATION_SPREAD,
            position_spread=settings.POSITION_SPREAD,
            seed=seed,
        )
        noise = trajectory.NoiseConfig(validate_nonnegative(noise_f, 'noise-f'),
                                       validate_nonnegative(noise_mu, 'noise-mu'), seed)
        dataset = trajectory.gen_dataset(params_from_options(mass, com, inertia, theta), traj, noise)

    dataset_io.write_csv(dataset, out_path)
    sidecar = dataset_io.truth_path(out_path)
    provenance = {k: v for k, v in dataset.metadata.items() if np.isscalar(v)}
    dataset_io.write_params(sidecar, dataset.ground_truth, provenance)
    log_activity('Dataset simulated', f'{len(dataset)} samples -> {out_path}')
    click.echo(f'Wrote {len(dataset)} samples to {out_path} (ground truth: {sidecar})')


@cli.command()
@click.option('--in', 'in_path', required=True, type=click.Path(dir_okay=False), help='Dataset CSV.')
@click.option('--method', type=click.Choice(METHODS, case_sensitive=False), default='manifold',
              show_default=True)
@click.option('--config', 'config_path', type=click.Path(dir_okay=False), default=None,
              help='KEY=VALUE solver settings.')
@click.option('--out', 'out_path', type=click.Path(dir_okay=False), default=None,
              help='Result document to write.')
@click.pass_obj
@handle_errors
def identify(settings, in_path, method, config_path, out_path):
    """Identify inertial parameters from a dataset."""
    solver_config = SolverConfig.from_settings(settings)
    if config_path:
        if not os.path.exists(config_path):
            raise ValidationError(f"solver config {config_path} does not exist")
        solver_config = validate_solver_config(config_path, solver_config)

    dataset = dataset_io.read_csv(in_path)
    system = stack(dataset.samples)
    excitation = analyse_excitation(system)
    extra = {
        'method': method.lower(),
        'samples': system.N,
        'excitation_rank': excitation.rank,
        'excitation_condition': excitation.condition_number,
    }

    if method.lower() == 'linear':
        pi = solve_linear(system)
    else:
        theta, solve_report = solve_manifold(system, initial_guess(system, solver_config), solver_config)
        pi = params_from_theta(theta)
        extra.update(solve_report.as_dict())
    extra['objective'] = system.objective(pi)
    extra['objective_per_sample'] = extra['objective'] / system.N

    _, report = check_full_physical(pi, tol=settings.CONSISTENCY_TOL)
    extra.update(_consistency_fields(report))

    click.echo(f'Identified ({method.lower()}, {system.N} samples, regressor rank {excitation.rank}):')
    for name, value in pi.as_dict().items():
        click.echo(f'  {name:<4} = {value: .9g}')
    if 'solver_status' in extra:
        click.echo(f"  solver: {extra['solver_status']} after {extra['solver_iterations']} iterations "
                   f"({extra['solver_wall_time']:.3f} s)")
    click.echo(f'  objective = {extra["objective"]:.6e} ({extra["objective_per_sample"]:.6e} per sample)')
    click.echo(report.format_text())

    if out_path:
        dataset_io.write_params(out_path, pi, extra)
        click.echo(f'Result written to {out_path}')
    log_activity('Parameters identified', f'{method} on {in_path}')


@cli.command()
@click.option('--params', 'params_path', type=click.Path(dir_okay=False), default=None,
              help='Result document to check.')
@click.option('--values', default=None, help='"m,mcx,mcy,mcz,ixx,ixy,ixz,iyy,iyz,izz".')
@click.option('--tol', default=None, help='Absolute tolerance in kg m^2.')
@click.pass_obj
@handle_errors
def check(settings, params_path, values, tol):
    """Check full physical consistency; exit 2 when it fails."""
    if bool(params_path) == bool(values):
        raise ValidationError("give exactly one of --params or --values")
    tol = settings.CONSISTENCY_TOL if tol is None else validate_tolerance(tol)
    if params_path:
        pi, _ = dataset_io.read_params(params_path)
    else:
        pi = InertialParams.from_vector(validate_values(values))

    ok, report = check_full_physical(pi, tol=tol)
    click.echo(report.format_text())
    log_activity('Consistency checked', f"fully consistent={ok}, failed={report.failed_conditions()}")
    if not ok:
        sys.exit(EXIT_NOT_CONSISTENT)


@cli.command()
@click.option('--fixtures', 'source', type=click.Choice(['builtin']), default='builtin', show_default=True)
@click.option('--tol', default=None, help='Absolute tolerance in kg m^2.')
@click.pass_obj
@handle_errors
def table1(settings, source, tol):
    """Check the published identification results row by row."""
    tol = settings.TABLE_TOL if tol is None else validate_tolerance(tol)
    verdicts = fixtures.classify_table(fixtures.TABLE_ROWS, tol, settings.ROUNDING_BAND)

    click.echo(f'{"dataset":<10} {"fully consistent":<17} {"violation":>10}  {"class":<16} '
               f'{"highlighted":<12} agrees')
    for v in verdicts:
        click.echo(f'{v.row.label:<10} {"yes" if v.fully_consistent else "NO":<17} {v.violation:>10.2e}  '
                   f'{v.classification:<16} {"yes" if v.row.highlighted else "":<12} '
                   f'{"yes" if v.matches_highlighting else "NO"}')

    disagreements = [v.row.label for v in verdicts if not v.matches_highlighting]
    if disagreements:
        click.echo(f'Rows disagreeing with the published highlighting: {", ".join(disagreements)}')
    log_activity('Published table checked', f'{source}, tol={tol}, disagreements={disagreements}')


@cli.command()
@click.option('--segment-times', default=','.join(f'{t:g}' for t in trajectory.SEGMENT_TIMES),
              show_default=True, help='Comma-separated segment times in s.')
@click.option('--noise-f', type=float, default=0.05, show_default=True)
@click.option('--noise-mu', type=float, default=0.005, show_default=True)
@click.option('--seed', type=int, default=None)
@click.option('--out', 'out_path', type=click.Path(dir_okay=False), default=None,
              help='CSV file for the result table.')
@click.pass_obj
@handle_errors
def experiment(settings, segment_times, noise_f, noise_mu, seed, out_path):
    """Identify one body from datasets of decreasing segment time with both methods."""
    seed = settings.SEED if seed is None else seed
    times = [validate_positive(t, 'segment-times') for t in segment_times.split(',') if t.strip()]
    solver_config = SolverConfig.from_settings(settings)
    pi_true = trajectory.poor_excitation_body()
    noise = trajectory.NoiseConfig(validate_nonnegative(noise_f, 'noise-f'),
                                   validate_nonnegative(noise_mu, 'noise-mu'), seed)

    rows = []
    for T in times:
        traj = trajectory.TrajectoryConfig(segment_time=T, duration=settings.DURATION,
                                           rate=settings.SAMPLE_RATE, seed=seed)
        system = stack(trajectory.gen_dataset(pi_true, traj, noise).samples)
        linear = solve_linear(system)
        theta, solve_report = solve_manifold(system, initial_guess(system, solver_config), solver_config)
        for label, pi in (('R10', linear), ('P', params_from_theta(theta))):
            ok, _ = check_full_physical(pi, tol=settings.CONSISTENCY_TOL)
            rows.append({'segment_time': T, 'manifold': label, **pi.as_dict(), 'fully_consistent': ok})

    table = pd.DataFrame(rows, columns=['segment_time', 'manifold', *PARAM_NAMES, 'fully_consistent'])
    click.echo(table.to_string(index=False, float_format=lambda x: f'{x:.3f}'))
    if out_path:
        table.to_csv(out_path, index=False)
        click.echo(f'Table written to {out_path}')
    log_activity('Experiment run', f'segment times {times}')


if __name__ == '__main__':
    cli()
