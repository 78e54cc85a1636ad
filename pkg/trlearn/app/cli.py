import click

from .. import __version__


@click.group(
    name="trlearn",
    subcommand_metavar="COMMAND <args>",
    options_metavar="<options>",
    context_settings=dict(max_content_width=85, help_option_names=["-h", "--help"]),
)
@click.help_option("--help", "-h", help="Show this message and exit.")
@click.version_option(
    version=__version__,
    prog_name="trlearn",
    message="[%(prog)s] Version %(version)s",
    help="Show the software version and exit.",
)
def main():
    pass


@main.command(short_help="Fit Tikhonov models and select lambda by cross-validation")
@click.option("--x", "x", required=True, type=click.Path(dir_okay=False), help="Predictor CSV.")
@click.option("--y", "y", required=True, type=click.Path(dir_okay=False), help="Response CSV.")
@click.option(
    "--segments", type=click.Path(dir_okay=False), default=None, help="Segment label file."
)
@click.option(
    "--reg",
    default="identity",
    show_default=True,
    help="Regularisation: identity, std, d1 or d2.",
)
@click.option("--epsilon", type=float, default=None, help="Scaling of the Legendre rows.")
@click.option("--lambda-min", type=float, default=1e-3, show_default=True)
@click.option("--lambda-max", type=float, default=1e3, show_default=True)
@click.option("--lambda-count", type=int, default=100, show_default=True)
@click.option("--linear-grid", is_flag=True, help="Space lambda values linearly.")
@click.option("--allow-zero", is_flag=True, help="Accept lambda = 0 on a linear grid.")
@click.option(
    "--strategy",
    default="loocv",
    show_default=True,
    help="loocv, gcv, segcv, vircv or segcv-explicit.",
)
@click.option(
    "--rules", default="min", show_default=True, help="Comma separated: min, one-se, chi2."
)
@click.option("--alpha", type=float, default=0.2, show_default=True, help="Chi-square level.")
@click.option("--out", required=True, type=click.Path(file_okay=False), help="Output directory.")
@click.option("--threads", type=int, default=None, help="Upper bound on worker threads.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option(
    "--header/--no-header",
    default=None,
    help="First CSV line holds column names. Detected from the first line by default.",
)
@click.option("--no-intercept", is_flag=True, help="Fit without a constant term.")
@click.option("-v", "--verbose", count=True, help="Repeat for more log output.")
@click.pass_context
def run(ctx, rules, no_intercept, verbose, **options):
    """\
    Evaluate the cross-validation curve of a Tikhonov model family and write
    curve.csv, selection.json, coefficients.csv and residuals.csv to --out.
    """
    from .. import logging as logg
    from .._errors import TRLearnError
    from .._settings import settings
    from . import pipeline

    settings.verbosity = min(1 + verbose, 4)
    try:
        config = pipeline.RunConfig(
            rules=tuple(r for r in rules.split(",") if r.strip()),
            fit_intercept=not no_intercept,
            **options,
        )
    except TRLearnError as e:
        logg.error(f"{type(e).__name__}: {e}")
        ctx.exit(e.exit_code)
    ctx.exit(pipeline.run(config))


@main.command(short_help="Print versions of the numerical dependencies")
def versions():
    import sys

    from ..logging import print_versions

    print_versions(file=sys.stdout)
