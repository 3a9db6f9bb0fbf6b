"""
Regenerate free-association norms with a chat model.

Every cue is sent `repetitions` times with the same prompt; each completion
is parsed into at most three responses and becomes one (cue, R1, R2, R3)
row.  Every finished slot is appended to a JSON-lines log so an interrupted
run can be resumed without re-issuing completed requests.

Log records:
    {"type": "header", "model", "endpoint", "repetitions", "cues"}
    {"type": "slot", "cue", "repetition", "text", "responses", "attempts", "ok", "timestamp"}

Dependencies:
    - tenacity

"""

from __future__ import annotations

import json
import logging
import os
import re
import threading
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Callable, Dict, Iterable, List, Optional, Protocol, Sequence, Tuple

from tenacity import Retrying, retry_if_exception_type, stop_after_attempt, wait_exponential

from freeassoc.config import read_kv_file
from freeassoc.llmgen.client import (AuthenticationFailed, CompletionFailure, GenerationException, RateLimiter,
                                     TransientFailure)
from freeassoc.norms.norms_table import NormsTable

CUE_PLACEHOLDER = "{cue}"
MAX_RESPONSES = 3
DEFAULT_TEMPLATE = ("You will be given a cue word. Write the first three words that come to mind when you "
                    "read it, one word per response, separated by commas. Cue: {cue}")

_SPLIT = re.compile(r"[,;\n]")
_LIST_MARKER = re.compile(r"^\s*(?:\d+\s*[.):-]|[-*•])\s*")
_EDGE_PUNCTUATION = "\"'`“”‘’.!?:()[] \t"


class ChatCompleter(Protocol):
    def complete(self, prompt: str) -> str:
        ...


@dataclass(frozen=True)
class GenConfig:
    """
    Arguments:
        endpoint:str
            base URL of the OpenAI-compatible API
        model:str
        prompt_template:str
            must contain {cue} exactly once
        repetitions:int
            completions per cue
            Default: 100
        temperature, max_tokens
            sampling settings, endpoint defaults when None
        max_attempts:int
            tries per slot for transient failures
            Default: 5
        backoff:float
            first retry delay in seconds, doubled each retry
            Default: 1.0
        rate_limit:Optional[float]
            requests per second
        concurrency:int
            requests in flight
            Default: 4
    """
    endpoint: str
    model: str
    prompt_template: str = DEFAULT_TEMPLATE
    repetitions: int = 100
    temperature: Optional[float] = None
    max_tokens: Optional[int] = None
    max_attempts: int = 5
    backoff: float = 1.0
    rate_limit: Optional[float] = None
    concurrency: int = 4

    def __post_init__(self):
        if self.prompt_template.count(CUE_PLACEHOLDER) != 1:
            raise GenerationException(f"Prompt template must contain {CUE_PLACEHOLDER} exactly once")
        if self.repetitions < 1:
            raise GenerationException(f"repetitions must be at least 1, got {self.repetitions}")
        if self.max_attempts < 1:
            raise GenerationException(f"max_attempts must be at least 1, got {self.max_attempts}")
        if self.backoff < 0:
            raise GenerationException(f"backoff must be non-negative, got {self.backoff}")
        if self.rate_limit is not None and self.rate_limit <= 0:
            raise GenerationException(f"rate_limit must be positive, got {self.rate_limit}")
        if self.concurrency < 1:
            raise GenerationException(f"concurrency must be at least 1, got {self.concurrency}")

    @classmethod
    def from_file(cls, path: str) -> "GenConfig":
        values = read_kv_file(path, GEN_KEYS)
        for key in ("endpoint", "model"):
            if key not in values:
                raise GenerationException(f"{path}: missing required key {key!r}")
        return cls(**values)

    def prompt(self, cue: str) -> str:
        return self.prompt_template.replace(CUE_PLACEHOLDER, cue)


GEN_KEYS: Dict[str, Callable[[str], object]] = {
    "endpoint": str,
    "model": str,
    "prompt_template": lambda v: v.replace("\\n", "\n"),
    "repetitions": int,
    "temperature": float,
    "max_tokens": int,
    "max_attempts": int,
    "backoff": float,
    "rate_limit": float,
    "concurrency": int,
}


@dataclass(frozen=True)
class RawGeneration:
    cue: str
    repetition: int
    text: str
    responses: Tuple[str, ...]
    attempts: int
    ok: bool
    timestamp: str = field(default="", compare=False)

    def __post_init__(self):
        if len(self.responses) > MAX_RESPONSES:
            raise GenerationException(f"At most {MAX_RESPONSES} responses per slot")

    def row(self) -> Tuple[str, str, str, str]:
        padded = tuple(self.responses) + ("",) * (MAX_RESPONSES - len(self.responses))
        return (self.cue,) + padded

    def to_record(self) -> dict:
        return {"type": "slot", "cue": self.cue, "repetition": self.repetition, "text": self.text,
                "responses": list(self.responses), "attempts": self.attempts, "ok": self.ok,
                "timestamp": self.timestamp}

    @classmethod
    def from_record(cls, record: dict) -> "RawGeneration":
        return cls(cue=record["cue"], repetition=int(record["repetition"]), text=record.get("text", ""),
                   responses=tuple(record["responses"]), attempts=int(record["attempts"]),
                   ok=bool(record["ok"]), timestamp=record.get("timestamp", ""))


def parse_responses(text: str) -> Tuple[str, ...]:
    """
    Split a completion on commas, semicolons and newlines, strip list
    markers, quotes and trailing punctuation, keep the first three.
    """
    responses = []
    for part in _SPLIT.split(text or ""):
        word = _LIST_MARKER.sub("", part).strip(_EDGE_PUNCTUATION)
        if word:
            responses.append(word)
        if len(responses) == MAX_RESPONSES:
            break
    return tuple(responses)


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


class GenerationLog:
    """Append-only JSON-lines writer; appends are serialized across threads"""

    def __init__(self, path: str):
        self.path = path
        self._lock = threading.Lock()

    def append(self, record: dict) -> None:
        line = json.dumps(record, ensure_ascii=False, sort_keys=True)
        with self._lock:
            with open(self.path, "a", encoding="utf-8", newline="\n") as f:
                f.write(line + "\n")
                f.flush()


def read_log(path: str) -> Tuple[dict, List[RawGeneration]]:
    """
    Raises:
        GenerationException:
            no header, unreadable JSON, or an unknown record type
    """
    header = None
    slots: List[RawGeneration] = []
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                kind = record["type"]
                if kind == "header":
                    if header is not None:
                        raise GenerationException("second header record")
                    header = record
                elif kind == "slot":
                    if header is None:
                        raise GenerationException("slot record before the header")
                    slots.append(RawGeneration.from_record(record))
                else:
                    raise GenerationException(f"unknown record type {kind!r}")
            except (json.JSONDecodeError, KeyError, TypeError, ValueError, GenerationException) as e:
                raise GenerationException(f"{path}:{lineno}: corrupt log record: {e}")
    if header is None:
        raise GenerationException(f"{path}: log has no header")
    return header, slots


class _SlotRunner:
    """Requests one slot with rate limiting and retries, then logs it"""

    def __init__(self, cfg: GenConfig, client: ChatCompleter, log: GenerationLog, limiter: RateLimiter,
                 sleep: Callable[[float], None]):
        self.cfg = cfg
        self.client = client
        self.log = log
        self.limiter = limiter
        self.sleep = sleep
        self.abort = threading.Event()

    def __call__(self, cue: str, repetition: int) -> Optional[RawGeneration]:
        if self.abort.is_set():
            return None
        attempts = 0
        prompt = self.cfg.prompt(cue)

        def request() -> str:
            nonlocal attempts
            attempts += 1
            self.limiter.acquire()
            return self.client.complete(prompt)

        retrying = Retrying(
            stop=stop_after_attempt(self.cfg.max_attempts),
            wait=wait_exponential(multiplier=self.cfg.backoff, min=self.cfg.backoff),
            retry=retry_if_exception_type(TransientFailure),
            sleep=self.sleep,
            reraise=True,
            before_sleep=lambda state: logging.info(
                f"Retrying {cue!r}#{repetition} after attempt {state.attempt_number}: {state.outcome.exception()}")
        )
        try:
            text = retrying(request)
        except AuthenticationFailed:
            self.abort.set()
            raise
        except CompletionFailure as e:
            logging.warning(f"Giving up on {cue!r}#{repetition} after {attempts} attempts: {e}")
            generation = RawGeneration(cue, repetition, "", (), attempts, False, _now())
        else:
            responses = parse_responses(text)
            if not responses:
                logging.warning(f"No responses parsed for {cue!r}#{repetition}: {text!r}")
            generation = RawGeneration(cue, repetition, text, responses, attempts, True, _now())
        self.log.append(generation.to_record())
        return generation


def _unique(cues: Iterable[str]) -> List[str]:
    seen = {}
    for cue in cues:
        seen.setdefault(cue, None)
    return list(seen)


def _run_slots(slots: Sequence[Tuple[str, int]], cfg: GenConfig, client: ChatCompleter, log: GenerationLog,
               clock: Callable[[], float], sleep: Callable[[float], None],
               threads: Optional[int]) -> List[RawGeneration]:
    limiter = RateLimiter(cfg.rate_limit, clock, sleep)
    runner = _SlotRunner(cfg, client, log, limiter, sleep)
    workers = min(cfg.concurrency, threads) if threads else cfg.concurrency
    results: List[RawGeneration] = []
    if not slots:
        return results
    logging.info(f"Requesting {len(slots)} completions from {cfg.model} with {workers} workers")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(runner, cue, repetition) for cue, repetition in slots]
        try:
            for future in as_completed(futures):
                generation = future.result()
                if generation is not None:
                    results.append(generation)
        except AuthenticationFailed as e:
            for future in futures:
                future.cancel()
            raise GenerationException(f"Authentication failed, run aborted: {e}")
    return results


def _assemble(cues: Sequence[str], repetitions: int, generations: Iterable[RawGeneration]) -> NormsTable:
    """Rectangular table sorted by cue and repetition; slots without a successful record are blank"""
    done: Dict[Tuple[str, int], RawGeneration] = {}
    for g in generations:
        if g.ok or (g.cue, g.repetition) not in done:
            done[(g.cue, g.repetition)] = g
    rows = []
    for cue in sorted(cues):
        for repetition in range(repetitions):
            g = done.get((cue, repetition))
            rows.append(g.row() if g is not None and g.ok else (cue, "", "", ""))
    return NormsTable.from_rows(rows)


def generate(cues: Sequence[str], cfg: GenConfig, client: ChatCompleter, log_path: str,
             clock: Optional[Callable[[], float]] = None, sleep: Optional[Callable[[float], None]] = None,
             threads: Optional[int] = None) -> Tuple[NormsTable, List[RawGeneration]]:
    """
    Request cfg.repetitions completions for every cue.

    Arguments:
        cues:Sequence[str]
            duplicates are ignored
        cfg:GenConfig
        client:ChatCompleter
            anything with complete(prompt) -> str, normally a ChatClient
        log_path:str
            JSON-lines log; must not exist yet, use resume() to continue one
        clock, sleep
            time source and sleep used for rate limiting and backoff
        threads:Optional[int]
            further cap on concurrent requests

    Returns:
        the raw norms table (rows per cue == repetitions) and the generations

    Raises:
        GenerationException:
            authentication failure, or an existing log
    """
    if os.path.exists(log_path) and os.path.getsize(log_path) > 0:
        raise GenerationException(f"{log_path} already exists; use resume to continue it")
    unique = _unique(cues)
    if len(unique) != len(cues):
        logging.warning(f"Ignoring {len(cues) - len(unique)} duplicate cues")
    log = GenerationLog(log_path)
    log.append({"type": "header", "model": cfg.model, "endpoint": cfg.endpoint,
                "repetitions": cfg.repetitions, "cues": unique})
    slots = [(cue, repetition) for cue in unique for repetition in range(cfg.repetitions)]
    generations = _run_slots(slots, cfg, client, log, clock or time.monotonic, sleep or time.sleep, threads)
    failed = sum(1 for g in generations if not g.ok)
    if failed:
        logging.warning(f"{failed} of {len(slots)} slots failed and were left blank")
    return _assemble(unique, cfg.repetitions, generations), sorted(generations, key=lambda g: (g.cue, g.repetition))


def resume(log_path: str, cfg: GenConfig, client: ChatCompleter,
           clock: Optional[Callable[[], float]] = None, sleep: Optional[Callable[[float], None]] = None,
           threads: Optional[int] = None) -> Tuple[NormsTable, List[RawGeneration]]:
    """
    Request only the slots the log has no successful record for.

    Raises:
        GenerationException:
            corrupt log, or a log written for another model or repetition count
    """
    header, previous = read_log(log_path)
    if header.get("model") != cfg.model:
        raise GenerationException(f"Log was written for model {header.get('model')!r}, config has {cfg.model!r}")
    if header.get("repetitions") != cfg.repetitions:
        raise GenerationException(f"Log was written for {header.get('repetitions')} repetitions, "
                                  f"config has {cfg.repetitions}")
    cues = list(header.get("cues", []))
    completed = {(g.cue, g.repetition) for g in previous if g.ok}
    slots = [(cue, repetition) for cue in cues for repetition in range(cfg.repetitions)
             if (cue, repetition) not in completed]
    logging.info(f"Resuming {log_path}: {len(completed)} slots done, {len(slots)} to request")
    generations = _run_slots(slots, cfg, client, GenerationLog(log_path), clock or time.monotonic,
                             sleep or time.sleep, threads)
    merged = list(previous) + generations
    latest = {}
    for g in merged:
        if g.ok or (g.cue, g.repetition) not in latest:
            latest[(g.cue, g.repetition)] = g
    return _assemble(cues, cfg.repetitions, merged), sorted(latest.values(), key=lambda g: (g.cue, g.repetition))
