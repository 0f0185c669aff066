import sys
import os

# Add project root to python path
sys.path.append(os.getcwd())

from sqlalchemy import inspect
from app.core.config import settings
from app.core.database import engine, init_db


def main():
    print(f"Connecting to {settings.DATABASE_URL}...")
    try:
        init_db()
    except Exception as e:
        print(f"Error creating tables: {e}")
        print("Check ASYNCLOCAL_DATABASE_URL in your .env.")
        return 1

    tables = inspect(engine).get_table_names()
    print(f"Tables ready: {', '.join(sorted(tables))}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
