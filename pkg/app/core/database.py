from sqlalchemy import create_engine
from sqlalchemy.orm import declarative_base, sessionmaker
from sqlalchemy.pool import NullPool, StaticPool

from app.core.config import settings

SQLALCHEMY_DATABASE_URL = settings.DATABASE_URL

connect_args = {"check_same_thread": False} if SQLALCHEMY_DATABASE_URL.startswith("sqlite") else {}
# An in-memory SQLite database lives as long as its one connection
in_memory = SQLALCHEMY_DATABASE_URL in ("sqlite://", "sqlite:///:memory:")
engine = create_engine(
    SQLALCHEMY_DATABASE_URL,
    pool_pre_ping=True,
    poolclass=StaticPool if in_memory else NullPool,
    connect_args=connect_args,
)
SessionLocal = sessionmaker(autocommit=False, autoflush=False, bind=engine)

Base = declarative_base()


def init_db(bind=None):
    """Create the ledger tables if they are missing."""
    # Import so the tables register on Base.metadata
    from app.models import models  # noqa: F401

    Base.metadata.create_all(bind=bind or engine)
