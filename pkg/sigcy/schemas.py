"""
Database schemas for sigcy
Only the on-disk count cache lives in the database
"""
from datetime import datetime, timezone

from sqlalchemy import BigInteger, DateTime, Integer, String
from sqlalchemy.orm import DeclarativeBase, Mapped, mapped_column


class Base(DeclarativeBase):
    pass


class CountRecord(Base):
    """
    Affine-cone and projective point counts of a catalog variety over F_{p^k}

    Rows are keyed on the counting code version; bumping sigcy.CODE_VERSION
    makes old rows invisible without a migration.
    """
    __tablename__ = "count_cache"

    variety: Mapped[str] = mapped_column(String, primary_key=True)
    p: Mapped[int] = mapped_column(Integer, primary_key=True)
    k: Mapped[int] = mapped_column(Integer, primary_key=True)
    code_version: Mapped[str] = mapped_column(String, primary_key=True)
    affine_count: Mapped[int] = mapped_column(BigInteger)
    projective_count: Mapped[int] = mapped_column(BigInteger)
    elapsed_ms: Mapped[int] = mapped_column(Integer, default=0)
    created_at: Mapped[datetime] = mapped_column(
        DateTime, default=lambda: datetime.now(timezone.utc).replace(tzinfo=None))
