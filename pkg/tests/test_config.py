from app.core.config import Settings


def test_database_url_from_prefixed_variable(monkeypatch):
    monkeypatch.setenv("ASYNCLOCAL_DATABASE_URL", "postgres://lab@db/ledger")
    assert Settings(_env_file=None).DATABASE_URL == "postgresql://lab@db/ledger"


def test_unprefixed_names_are_ignored(monkeypatch):
    monkeypatch.delenv("ASYNCLOCAL_DATABASE_URL", raising=False)
    monkeypatch.setenv("ASYNCLOCAL_DB", "sqlite:///elsewhere.db")
    assert Settings(_env_file=None).DATABASE_URL == "sqlite:///./asynclocal.db"
