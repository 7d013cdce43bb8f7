"""
Database connection management for the count cache
SQLite tuned for concurrent readers (WAL mode, busy timeout)
"""
from contextlib import contextmanager
from pathlib import Path
from typing import Optional
import logging

from sqlalchemy import create_engine, event, select
from sqlalchemy.orm import scoped_session, sessionmaker
from sqlalchemy.pool import NullPool

from . import CODE_VERSION
from .schemas import Base, CountRecord

logger = logging.getLogger("sigcy.db")


class DatabaseManager:
    """
    Manages database connections with proper pooling and SQLite optimization
    """

    def __init__(self, db_url: str):
        self.db_url = db_url
        self.is_sqlite = "sqlite" in self.db_url.lower()

        if self.is_sqlite:
            self._ensure_parent_dir()
            self.engine = create_engine(
                self.db_url,
                poolclass=NullPool,  # No pooling for SQLite (avoids locking issues)
                connect_args={"check_same_thread": False},
                echo=False
            )
            self._configure_sqlite()
        else:
            self.engine = create_engine(
                self.db_url,
                pool_size=5,
                max_overflow=10,
                pool_pre_ping=True,
                echo=False
            )

        self.session_factory = sessionmaker(
            bind=self.engine,
            expire_on_commit=False,
            autoflush=False
        )
        self.ScopedSession = scoped_session(self.session_factory)

        logger.debug(f"Database initialized: {self.db_url}")

    def _ensure_parent_dir(self):
        prefix = "sqlite:///"
        if self.db_url.startswith(prefix) and ":memory:" not in self.db_url:
            Path(self.db_url[len(prefix):]).parent.mkdir(parents=True, exist_ok=True)

    def _configure_sqlite(self):
        """WAL journal, relaxed sync and a generous busy timeout for parallel sweeps"""

        @event.listens_for(self.engine, "connect")
        def set_sqlite_pragmas(dbapi_conn, connection_record):
            cursor = dbapi_conn.cursor()
            cursor.execute("PRAGMA journal_mode=WAL")
            cursor.execute("PRAGMA synchronous=NORMAL")
            cursor.execute("PRAGMA busy_timeout=60000")
            cursor.execute("PRAGMA cache_size=-16000")
            cursor.close()

    def init_db(self):
        """Initialize database tables"""
        Base.metadata.create_all(self.engine)
        logger.debug("Database tables initialized")

    def drop_all(self):
        """Drop all tables (use with caution!)"""
        logger.warning("Dropping all database tables")
        Base.metadata.drop_all(self.engine)

    @contextmanager
    def session_scope(self):
        """
        Provide transactional scope around series of operations

        Usage:
            with db.session_scope() as session:
                session.merge(record)
                # Automatic commit on success, rollback on exception
        """
        session = self.ScopedSession()
        try:
            yield session
            session.commit()
        except Exception as e:
            session.rollback()
            logger.error(f"Database transaction failed: {str(e)}")
            raise
        finally:
            session.close()

    def dispose(self):
        self.ScopedSession.remove()
        self.engine.dispose()


class CountCache:
    """
    Point counts keyed by (variety, p, k, code version)

    Counting functions accept an optional cache; without one they always
    recompute.
    """

    def __init__(self, db: DatabaseManager, code_version: str = CODE_VERSION):
        self.db = db
        self.code_version = code_version
        self.db.init_db()

    @classmethod
    def from_url(cls, db_url: str) -> "CountCache":
        return cls(DatabaseManager(db_url))

    def get(self, variety: str, p: int, k: int = 1) -> Optional[CountRecord]:
        with self.db.session_scope() as session:
            record = session.get(CountRecord, (variety, p, k, self.code_version))
            if record is not None:
                session.expunge(record)
            return record

    def put(self, variety: str, p: int, k: int, affine: int, projective: int,
            elapsed_ms: int = 0) -> None:
        with self.db.session_scope() as session:
            session.merge(CountRecord(variety=variety, p=p, k=k,
                                      code_version=self.code_version,
                                      affine_count=int(affine),
                                      projective_count=int(projective),
                                      elapsed_ms=int(elapsed_ms)))

    def entries(self, variety: Optional[str] = None):
        with self.db.session_scope() as session:
            stmt = select(CountRecord).where(CountRecord.code_version == self.code_version)
            if variety:
                stmt = stmt.where(CountRecord.variety == variety)
            rows = list(session.scalars(stmt.order_by(CountRecord.variety, CountRecord.p)))
            for row in rows:
                session.expunge(row)
            return rows


# Global cache instance, created on first use
_cache: Optional[CountCache] = None


def get_cache(db_url: Optional[str] = None) -> CountCache:
    """Process-wide count cache (URL from the config manager unless given)"""
    global _cache
    if _cache is None or (db_url is not None and _cache.db.db_url != db_url):
        if db_url is None:
            from .config import get_config
            db_url = get_config().db_url
        _cache = CountCache.from_url(db_url)
    return _cache
