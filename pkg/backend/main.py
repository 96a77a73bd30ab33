import click

from app.commands import closure, embedding, expressions, solving
from app.core.logging_config import setup_logging


@click.group(
    name="expcert",
    help="Certified exponential-algebraic toolkit",
)
@click.option("--log-level", default=None, help="Override LOG_LEVEL from settings")
def cli(log_level):
    setup_logging(log_level)


# Include routers
for router in (expressions.router, solving.router, closure.router, embedding.router):
    for name, command in router.commands.items():
        cli.add_command(command, name)

if __name__ == "__main__":
    cli()
