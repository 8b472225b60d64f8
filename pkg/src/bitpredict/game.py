"""Interactive human-vs-predictor game.

Each round follows a commit-before-reveal protocol: the computer draws its
bit c from the current model, publishes sha256("c:nonce") and only then
accepts the human bit b.  The computer wins the round iff c == b (it
anticipated the choice); the human's balance moves by the round stake and
the session ends at the jackpot or broke cutoff.  After every round the
model is retrained on the most recent window of human bits; until d+1
history bits exist the computer plays a fair coin.
"""

from __future__ import annotations

import hashlib
import json
import uuid
from dataclasses import dataclass, field

import numpy as np

from .bitstream import Bitstream, autocorrelation, zero_bias
from .predictors import PredictorSpec, build

DEFAULT_STAKE = 1.0
DEFAULT_JACKPOT = 25.0
DEFAULT_BROKE = -25.0
DEFAULT_WINDOW = 125


class ProtocolError(RuntimeError):
    """Round calls arrived out of order or on a finished session."""


@dataclass(frozen=True)
class StakesConfig:
    stake: float = DEFAULT_STAKE
    jackpot: float = DEFAULT_JACKPOT
    broke: float = DEFAULT_BROKE

    def __post_init__(self):
        if self.stake <= 0:
            raise ValueError("stake must be positive")
        if self.jackpot <= 0 or self.broke >= 0:
            raise ValueError("jackpot must be positive and broke negative")


@dataclass
class RoundRecord:
    round: int
    commitment: str
    nonce: str
    computer_bit: int
    human_bit: int
    computer_win: bool
    balance_after: float

    def to_dict(self) -> dict:
        return {
            "round": self.round,
            "commitment": self.commitment,
            "nonce": self.nonce,
            "computer_bit": self.computer_bit,
            "human_bit": self.human_bit,
            "computer_win": self.computer_win,
            "balance_after": self.balance_after,
        }


@dataclass
class Transcript:
    session_id: str
    rounds: list[RoundRecord]
    metadata: dict = field(default_factory=dict)


def commitment_hash(computer_bit: int, nonce: str) -> str:
    return hashlib.sha256(f"{computer_bit}:{nonce}".encode("utf-8")).hexdigest()


def verify_round(record: RoundRecord) -> bool:
    return commitment_hash(record.computer_bit, record.nonce) == record.commitment


class GameSession:
    """One human-vs-predictor match; all round operations mutate this
    object only, so per-session serialization makes concurrent sessions
    safe."""

    def __init__(
        self,
        predictor_spec: PredictorSpec | None = None,
        depth: int = 3,
        stakes: StakesConfig | None = None,
        seed: int = 0,
        window_width: int = DEFAULT_WINDOW,
        session_id: str | None = None,
    ):
        self.id = session_id or uuid.uuid4().hex
        self.spec = predictor_spec or PredictorSpec("oracle", {"mode": "argmax"})
        self.depth = depth
        self.stakes = stakes or StakesConfig()
        self.seed = seed
        self.window_width = window_width
        self.rng = np.random.default_rng(seed)
        self.history: list[int] = []
        self.balance = 0.0
        self.rounds: list[RoundRecord] = []
        self.status = "active"
        self.pending: tuple[int, str, str] | None = None
        self._model = None

    @property
    def round_index(self) -> int:
        return len(self.rounds)

    def _draw_computer_bit(self) -> int:
        if self._model is None:
            return int(self.rng.integers(0, 2))  # fair coin before enough history
        return int(self._model.forecast_bit(self.history, self.rng))

    def commit_round(self) -> str:
        """Draw the computer's bit, publish its commitment hash."""
        if self.status != "active":
            raise ProtocolError(f"session is {self.status}")
        if self.pending is not None:
            raise ProtocolError("a commitment is already pending")
        c = self._draw_computer_bit()
        nonce = self.rng.bytes(16).hex()
        digest = commitment_hash(c, nonce)
        self.pending = (c, nonce, digest)
        return digest

    def play_round(self, human_bit: int) -> RoundRecord:
        """Reveal the committed bit, settle the stake, retrain online."""
        if self.status != "active":
            raise ProtocolError(f"session is {self.status}")
        if self.pending is None:
            raise ProtocolError("no commitment is pending")
        if human_bit not in (0, 1):
            raise ValueError("human bit must be 0 or 1")
        c, nonce, digest = self.pending
        self.pending = None
        win = c == int(human_bit)
        self.balance += -self.stakes.stake if win else self.stakes.stake
        self.history.append(int(human_bit))
        record = RoundRecord(
            round=self.round_index + 1,  # 1-based: equals round_index once stored
            commitment=digest,
            nonce=nonce,
            computer_bit=c,
            human_bit=int(human_bit),
            computer_win=win,
            balance_after=self.balance,
        )
        self.rounds.append(record)
        if self.balance >= self.stakes.jackpot:
            self.status = "jackpot"
        elif self.balance <= self.stakes.broke:
            self.status = "broke"
        else:
            self._retrain()
        return record

    def end(self) -> None:
        if self.status == "active":
            self.status = "ended"
            self.pending = None

    def _retrain(self):
        if len(self.history) < self.depth + 1:
            return
        window = self.history[-self.window_width :]
        model = build(self.spec, self.depth)
        model.fit(window, self.rng)
        self._model = model

    def state_dict(self) -> dict:
        recent = [r.to_dict() for r in self.rounds[-36:]]
        return {
            "id": self.id,
            "status": self.status,
            "balance": self.balance,
            "round": self.round_index,
            "committed": self.pending is not None,
            "commitment": self.pending[2] if self.pending else None,
            "stakes": {
                "stake": self.stakes.stake,
                "jackpot": self.stakes.jackpot,
                "broke": self.stakes.broke,
            },
            "recent_rounds": recent,
        }


def create_session(
    predictor_spec: PredictorSpec | None = None,
    depth: int = 3,
    stakes: StakesConfig | None = None,
    seed: int = 0,
    window_width: int = DEFAULT_WINDOW,
    choose: str = "fixed",
) -> GameSession:
    """Start a session.  With choose="random" the predictor family is
    drawn between the count oracle and the quantum classifier, mirroring
    live data collection; "fixed" uses the supplied spec as is."""
    if choose not in ("fixed", "random"):
        raise ValueError("choose must be 'fixed' or 'random'")
    if choose == "random":
        picker = np.random.default_rng(seed)
        if picker.integers(0, 2) == 0:
            predictor_spec = PredictorSpec("oracle", {"mode": "sample"})
        else:
            predictor_spec = PredictorSpec(
                "quantum", {"restarts": 4, "tolerance": 1e-4}
            )
    return GameSession(
        predictor_spec=predictor_spec,
        depth=depth,
        stakes=stakes,
        seed=seed,
        window_width=window_width,
    )


def export_transcript(session: GameSession) -> Transcript:
    return Transcript(
        session_id=session.id,
        rounds=list(session.rounds),
        metadata={
            "predictor": session.spec.to_dict(),
            "depth": session.depth,
            "seed": session.seed,
            "status": session.status,
            "window_width": session.window_width,
            "stakes": {
                "stake": session.stakes.stake,
                "jackpot": session.stakes.jackpot,
                "broke": session.stakes.broke,
            },
        },
    )


def transcript_to_jsonl(transcript: Transcript) -> str:
    lines = [json.dumps({"session": transcript.session_id, **transcript.metadata})]
    lines += [json.dumps(r.to_dict(), sort_keys=True) for r in transcript.rounds]
    return "\n".join(lines) + "\n"


def transcript_from_jsonl(text: str) -> Transcript:
    lines = [line for line in text.splitlines() if line.strip()]
    header = json.loads(lines[0])
    rounds = [RoundRecord(**json.loads(line)) for line in lines[1:]]
    session_id = header.pop("session", "")
    return Transcript(session_id=session_id, rounds=rounds, metadata=header)


def human_bitstream(transcript: Transcript) -> Bitstream:
    """The human's choices as a corpus-loadable stream."""
    bits = [r.human_bit for r in transcript.rounds]
    if not bits:
        raise ValueError("transcript has no rounds")
    return Bitstream(bits=bits, source="game_transcript", id=transcript.session_id)


def replay_transcript(transcript: Transcript, stake: float = DEFAULT_STAKE) -> float:
    """Re-derive the final balance from the round records, verifying every
    commitment along the way."""
    balance = 0.0
    for record in transcript.rounds:
        if not verify_round(record):
            raise ValueError(f"round {record.round}: commitment does not verify")
        win = record.computer_bit == record.human_bit
        if win != record.computer_win:
            raise ValueError(f"round {record.round}: win flag inconsistent")
        balance += -stake if win else stake
        if abs(balance - record.balance_after) > 1e-9:
            raise ValueError(f"round {record.round}: balance mismatch")
    return balance


def session_report(session: GameSession, taps: int = 36) -> dict:
    """Post-game predictability statistics over the human's bits."""
    bits = session.history
    report: dict = {
        "rounds": len(bits),
        "computer_wins": sum(r.computer_win for r in session.rounds),
    }
    if session.rounds:
        report["running_accuracy"] = report["computer_wins"] / len(session.rounds)
    if len(bits) >= 2:
        stream = Bitstream(bits=bits, source="game_transcript", id=session.id)
        report["zero_bias"] = zero_bias(stream)
        max_lag = min(taps, len(bits) - 2)
        if max_lag >= 1:
            report["autocorrelation"] = autocorrelation(stream, max_lag)
    return report
