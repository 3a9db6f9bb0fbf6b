"""
Chat-completion client for an OpenAI-compatible endpoint, and a request
rate limiter.

API errors are mapped onto three failure classes so the generator can
decide what to do without knowing the HTTP client:
    AuthenticationFailed   abort the run
    TransientFailure       retry with backoff
    CompletionFailure      give up on this slot

Dependencies:
    - openai

"""

from __future__ import annotations

import os
import threading
import time
from typing import Callable, Optional

import openai

from freeassoc import FreeAssocException

API_KEY_ENV = "LLM_API_KEY"


class GenerationException(FreeAssocException):
    pass


class AuthenticationFailed(GenerationException):
    pass


class CompletionFailure(GenerationException):
    pass


class TransientFailure(CompletionFailure):
    pass


class ChatClient:
    """
    Arguments:
        endpoint:str
            base URL of the chat-completions API
        model:str
            model name sent with every request
        temperature:Optional[float]
            Default: endpoint default
        max_tokens:Optional[int]
            Default: endpoint default
        api_key:Optional[str]
            Default: the LLM_API_KEY environment variable
        timeout:float
            seconds per request
            Default: 60
    """

    def __init__(self, endpoint: str, model: str, temperature: Optional[float] = None,
                 max_tokens: Optional[int] = None, api_key: Optional[str] = None, timeout: float = 60.0):
        key = api_key or os.environ.get(API_KEY_ENV)
        if not key:
            raise AuthenticationFailed(f"No API key: set {API_KEY_ENV}")
        self.model = model
        self._options = {}
        if temperature is not None:
            self._options["temperature"] = temperature
        if max_tokens is not None:
            self._options["max_tokens"] = max_tokens
        # retries are handled by the generator
        self._client = openai.OpenAI(base_url=endpoint, api_key=key, timeout=timeout, max_retries=0)

    def __repr__(self):
        return f"ChatClient {self.model} at {self._client.base_url}"

    def complete(self, prompt: str) -> str:
        try:
            response = self._client.chat.completions.create(
                model=self.model,
                messages=[{"role": "user", "content": prompt}],
                **self._options
            )
        except (openai.AuthenticationError, openai.PermissionDeniedError) as e:
            raise AuthenticationFailed(str(e))
        except (openai.APIConnectionError, openai.RateLimitError, openai.InternalServerError) as e:
            raise TransientFailure(f"{type(e).__name__}: {e}")
        except openai.APIError as e:
            raise CompletionFailure(f"{type(e).__name__}: {e}")
        if not response.choices:
            raise CompletionFailure("Response has no choices")
        return response.choices[0].message.content or ""


class RateLimiter:
    """
    Spaces request starts at least 1 / rate seconds apart across threads.

    Arguments:
        rate:Optional[float]
            requests per second; None disables the limit
        clock:Callable[[], float]
            Default: time.monotonic
        sleep:Callable[[float], None]
            Default: time.sleep
    """

    def __init__(self, rate: Optional[float], clock: Callable[[], float] = time.monotonic,
                 sleep: Callable[[float], None] = time.sleep):
        if rate is not None and rate <= 0:
            raise GenerationException(f"Rate limit must be positive, got {rate}")
        self._interval = 1.0 / rate if rate else 0.0
        self._clock = clock
        self._sleep = sleep
        self._next = None
        self._lock = threading.Lock()

    def acquire(self) -> None:
        if not self._interval:
            return
        with self._lock:
            now = self._clock()
            if self._next is not None and now < self._next:
                self._sleep(self._next - now)
                now = self._next
            self._next = now + self._interval
