"""Pluggable translation backends for dataset generation.

The fixture provider serves translations from a TSV file and is the only
backend the test suite touches; the HTTP provider exists for users
regenerating data against a real service. Both can sit behind a disk
cache keyed by a content hash, so reruns perform zero backend lookups.

Fixture TSV format: ``source<TAB>target-label<TAB>translation``.
HTTP contract: POST JSON ``{"q": <text>, "target": <label>}`` to the
configured endpoint, response JSON ``{"translatedText": <text>}``. The
API key, if any, is read from the environment variable named by
``api_key_env`` and sent as a bearer token; it never appears in flags or
config files.
"""

from __future__ import annotations

import hashlib
import json
import os
import random
import time
import urllib.error
import urllib.request
from dataclasses import dataclass
from pathlib import Path

from .errors import DataError, FixtureMissError, ProviderError, UsageError


@dataclass(frozen=True)
class ProviderConfig:
    kind: str = "fixture"  # fixture | http
    fixture_path: str | None = None
    endpoint: str | None = None
    api_key_env: str | None = None
    cache_dir: str | None = None
    timeout: float = 10.0
    max_retries: int = 3

    def __post_init__(self):
        if self.kind == "fixture":
            if not self.fixture_path:
                raise UsageError("fixture provider needs fixture_path")
        elif self.kind == "http":
            if not self.endpoint:
                raise UsageError("http provider needs endpoint")
        else:
            raise UsageError(f"unknown provider kind {self.kind!r}")


def load_fixtures(path) -> dict[tuple[str, str], str]:
    """Parse the fixture TSV into a (source, label) -> translation map."""
    fixtures: dict[tuple[str, str], str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise DataError(
                    f"{path}:{lineno}: expected 3 tab-separated columns, got {len(parts)}"
                )
            source, label, translation = parts
            key = (source, label)
            if key in fixtures:
                raise DataError(f"{path}:{lineno}: duplicate key {key!r}")
            fixtures[key] = translation
    return fixtures


class Translator:
    """Backend dispatch plus optional disk cache.

    ``lookups`` counts actual backend hits (fixture map reads or HTTP
    calls); cache hits do not increment it.
    """

    def __init__(self, config: ProviderConfig):
        self.config = config
        self.lookups = 0
        self._fixtures: dict[tuple[str, str], str] | None = None
        if config.kind == "fixture":
            self._fixtures = load_fixtures(config.fixture_path)
        if config.cache_dir:
            Path(config.cache_dir).mkdir(parents=True, exist_ok=True)

    def translate(self, text: str, target: str) -> str:
        if not text:
            raise UsageError("cannot translate empty text")
        cache_path = self._cache_path(text, target)
        if cache_path is not None and cache_path.exists():
            return cache_path.read_text(encoding="utf-8")
        if self.config.kind == "fixture":
            result = self._fixture_lookup(text, target)
        else:
            result = self._http_lookup(text, target)
        if cache_path is not None:
            tmp = cache_path.with_suffix(".tmp." + str(os.getpid()))
            tmp.write_text(result, encoding="utf-8")
            os.replace(tmp, cache_path)
        return result

    def _cache_path(self, text: str, target: str) -> Path | None:
        if not self.config.cache_dir:
            return None
        digest = hashlib.sha256(
            "\x00".join((text, target, self.config.kind)).encode("utf-8")
        ).hexdigest()
        return Path(self.config.cache_dir) / digest

    def _fixture_lookup(self, text: str, target: str) -> str:
        self.lookups += 1
        key = (text, target)
        if key not in self._fixtures:
            raise FixtureMissError(f"no fixture translation for {key!r}")
        return self._fixtures[key]

    def _http_lookup(self, text: str, target: str) -> str:
        payload = json.dumps({"q": text, "target": target}).encode("utf-8")
        headers = {"Content-Type": "application/json"}
        if self.config.api_key_env:
            key = os.environ.get(self.config.api_key_env)
            if not key:
                raise UsageError(
                    f"environment variable {self.config.api_key_env} is not set"
                )
            headers["Authorization"] = f"Bearer {key}"
        delay = 0.5
        last_error = None
        for attempt in range(self.config.max_retries + 1):
            if attempt:
                time.sleep(delay * (0.5 + random.random()))
                delay *= 2
            self.lookups += 1
            request = urllib.request.Request(
                self.config.endpoint, data=payload, headers=headers
            )
            try:
                with urllib.request.urlopen(request, timeout=self.config.timeout) as resp:
                    body = json.loads(resp.read().decode("utf-8"))
            except (urllib.error.URLError, TimeoutError, ValueError) as exc:
                last_error = exc
                continue
            if "translatedText" not in body:
                raise ProviderError(f"response missing translatedText: {body!r}")
            return body["translatedText"]
        raise ProviderError(
            f"translation failed after {self.config.max_retries + 1} attempts: {last_error}"
        )


def translate(text: str, target: str, config: ProviderConfig) -> str:
    """One-shot convenience wrapper around a fresh Translator."""
    return Translator(config).translate(text, target)
