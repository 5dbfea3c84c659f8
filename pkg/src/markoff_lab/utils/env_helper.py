import logging
import re
from os import environ
from typing import Any, Dict

from markoff_lab.config import THREADS_ENV


class EnvHelper:
    """Utility class for runspec placeholders and environment settings."""

    @staticmethod
    def resolve_keywords(value: Any, keywords: Dict[str, str]) -> Any:
        """Recursively resolve {DEPTH}, {OUTPUT} and the other given keywords in config values."""
        if isinstance(value, str):
            for name, replacement in keywords.items():
                value = re.sub(r"\{" + re.escape(name) + r"\}", lambda _: str(replacement), value)
            return value

        elif isinstance(value, dict):
            return {key: EnvHelper.resolve_keywords(val, keywords) for key, val in value.items()}

        elif isinstance(value, list):
            return [EnvHelper.resolve_keywords(item, keywords) for item in value]

        return value

    @staticmethod
    def thread_cap(default: int = 1) -> int:
        """Worker count from MARKOFF_LAB_THREADS; anything but a positive integer falls back."""
        raw = environ.get(THREADS_ENV)
        if raw is None:
            return default
        try:
            threads = int(raw)
        except ValueError:
            logging.warning(f"{THREADS_ENV}={raw!r} is not an integer; using {default}")
            return default
        if threads < 1:
            logging.warning(f"{THREADS_ENV}={threads} is not positive; using {default}")
            return default
        return threads
