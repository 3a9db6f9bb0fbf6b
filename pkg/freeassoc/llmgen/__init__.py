from .client import (ChatClient, RateLimiter, GenerationException, AuthenticationFailed, CompletionFailure,
                     TransientFailure)
from .generate import GenConfig, RawGeneration, generate, resume, parse_responses, read_log
