from sqlalchemy import Column, Integer, String, DateTime, ForeignKey, Text, Boolean
from sqlalchemy.orm import relationship
from sqlalchemy.sql import func
import enum
from app.core.database import Base


class CampaignStatus(str, enum.Enum):
    PASSED = "passed"
    FAILED = "failed"
    INCOMPLETE = "incomplete"


class CampaignRun(Base):
    __tablename__ = "campaign_runs"

    id = Column(Integer, primary_key=True, index=True)
    algorithm = Column(String, index=True)
    graph_hash = Column(String, index=True)
    graph_label = Column(String, nullable=True) # e.g. "cycle:9"
    scheduler = Column(String)
    checks = Column(String) # comma separated checker names
    seed_start = Column(Integer)
    seed_count = Column(Integer)

    runs = Column(Integer, default=0)
    passes = Column(Integer, default=0)
    incomplete = Column(Integer, default=0)
    max_runtime = Column(Integer, default=0)
    first_failing_seed = Column(Integer, nullable=True)
    status = Column(String, default=CampaignStatus.PASSED)

    created_at = Column(DateTime(timezone=True), server_default=func.now())

    violations = relationship("CampaignViolation", back_populates="run", cascade="all, delete-orphan")


class CampaignViolation(Base):
    __tablename__ = "campaign_violations"

    id = Column(Integer, primary_key=True, index=True)
    run_id = Column(Integer, ForeignKey("campaign_runs.id"))
    seed = Column(Integer, index=True)
    check = Column(String)
    witness = Column(Text, nullable=True) # JSON
    scheduling = Column(Text) # newline-delimited blocks, replayable
    complete = Column(Boolean, default=True)

    created_at = Column(DateTime(timezone=True), server_default=func.now())

    run = relationship("CampaignRun", back_populates="violations")
