import logging
import sys

from app.cli.cli import build_parser
from app.core.config import settings
from app.core.errors import USAGE_ERRORS, AsyncLocalError

logger = logging.getLogger("app.main")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    # Diagnostics go to stderr; stdout carries the JSON reports
    logging.basicConfig(
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        level=(args.log_level or settings.LOG_LEVEL).upper(),
        stream=sys.stderr,
    )

    try:
        return args.handler(args)
    except USAGE_ERRORS as e:
        logger.error("%s", e)
        return 2
    except AsyncLocalError as e:
        # Correctness violations and wait-freedom failures
        logger.error("%s", e)
        return 1


if __name__ == "__main__":
    sys.exit(main())
