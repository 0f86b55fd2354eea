"""
Formato de eventos do transcript (uma linha JSON por evento).

O canal clássico é exatamente a visão de Eve: eventos clássicos carregam o
payload completo; eventos quânticos só o id do qubit; eventos out-of-band
(oob) nunca revelam bits de payload.
"""

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field


class Actor(str, Enum):
    ALICE = "Alice"
    BOB = "Bob"
    EVE = "Eve"
    AL = "AL"
    SYSTEM = "System"


class ChannelKind(str, Enum):
    CLASSICAL = "classical"
    QUANTUM = "quantum"
    OOB = "oob"


class EventKind(str, Enum):
    # Protocolo
    SESSION_STARTED = "session_started"
    ANGLE_SET_PUBLISHED = "angle_set_published"
    QUBIT_SENT = "qubit_sent"
    QUBIT_RESENT = "qubit_resent"
    DISCOVERY_REPORT = "discovery_report"
    DISCOVERY_VERDICT = "discovery_verdict"
    DISCOVERY_ACCEPTED = "discovery_accepted"
    DISCOVERY_ABORTED = "discovery_aborted"
    CHECKSUM = "checksum"
    SESSION_RESULT = "session_result"
    MESSAGE = "message"
    # Intermediário
    REGISTRATION = "registration"
    AUTH_CHALLENGE = "auth_challenge"
    AUTH_RESPONSE = "auth_response"
    AUTH_RESULT = "auth_result"
    RELAY_IN = "relay_in"
    RELAY_OUT = "relay_out"
    INSIDER_LEAK = "insider_leak"
    # MITM
    MITM_STATUS = "mitm_status"


class Event(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    index: int = Field(ge=0)
    actor: Actor
    channel: ChannelKind
    kind: EventKind
    payload_summary: str = ""
