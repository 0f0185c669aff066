import argparse

from app.cli.commands import campaign, coverfree, repro, run, search, verify, wsb
from app.core.config import settings

COMMANDS = (run, verify, search, repro, coverfree, wsb, campaign)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="asynclocal", description=settings.PROJECT_NAME)
    parser.add_argument("--log-level", default=None, help=f"default {settings.LOG_LEVEL}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        command.register(subparsers)
    return parser
