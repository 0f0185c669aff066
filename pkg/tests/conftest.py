import os

# Must be set before app.core.config is imported
os.environ.setdefault("ASYNCLOCAL_DATABASE_URL", "sqlite://")

import pytest
from sqlalchemy import create_engine
from sqlalchemy.orm import sessionmaker
from sqlalchemy.pool import StaticPool

from app.core.database import init_db
from app.core.graphs import cycle


@pytest.fixture
def table1_graph():
    """C5 with consecutive identifiers 3, 5, 4, 1, 6."""
    return cycle(5, ids=(3, 5, 4, 1, 6))


@pytest.fixture
def table2_graph():
    """C4 with consecutive identifiers 3, 4, 2, 1."""
    return cycle(4, ids=(3, 4, 2, 1))


@pytest.fixture
def session_factory():
    engine = create_engine("sqlite://", connect_args={"check_same_thread": False}, poolclass=StaticPool)
    init_db(bind=engine)
    yield sessionmaker(autocommit=False, autoflush=False, bind=engine)
    engine.dispose()
