import hashlib
import json
from pathlib import Path
from typing import Callable, Iterable, Iterator, Union

from src.application.dto.transcript_schema import Actor, ChannelKind, Event, EventKind

EventObserver = Callable[[Event], None]


class Transcript:
    """
    Log ordenado de todos os eventos de uma sessão.

    O tempo é apenas o contador lógico `index`; nenhum relógio de parede entra
    aqui, para que a mesma semente produza bytes idênticos.
    """

    def __init__(self):
        self._events: list[Event] = []

    def record(
        self,
        actor: Actor,
        channel: ChannelKind,
        kind: EventKind,
        payload_summary: str = "",
    ) -> Event:
        event = Event(
            index=len(self._events),
            actor=actor,
            channel=channel,
            kind=kind,
            payload_summary=payload_summary,
        )
        self._events.append(event)
        return event

    @property
    def events(self) -> list[Event]:
        return list(self._events)

    def __len__(self) -> int:
        return len(self._events)

    def __iter__(self) -> Iterator[Event]:
        return iter(self._events)

    def classical_events(self) -> list[Event]:
        return [e for e in self._events if e.channel is ChannelKind.CLASSICAL]

    def to_jsonl(self) -> str:
        return "".join(e.model_dump_json() + "\n" for e in self._events)

    def digest(self) -> str:
        return hashlib.sha256(self.to_jsonl().encode("utf-8")).hexdigest()


# ================================================================
# ARQUIVOS JSON LINES
# ================================================================

def write_events(events: Iterable[Event], path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for e in events:
            f.write(e.model_dump_json() + "\n")


def read_events(path: Union[str, Path]) -> list[Event]:
    with open(path, "r", encoding="utf-8") as f:
        return [Event.model_validate_json(line) for line in f if line.strip()]


def write_summary(summary: dict, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(summary, f, indent=2, sort_keys=False)
        f.write("\n")
