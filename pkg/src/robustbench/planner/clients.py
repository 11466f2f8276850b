"""Chat-completion clients: live HTTP endpoint and offline transcript replay."""

from __future__ import annotations

import logging
import os
import time
from pathlib import Path
from typing import Protocol

from ..errors import TransportError

log = logging.getLogger(__name__)

API_KEY_ENV = "RB_LLM_API_KEY"


class ChatClient(Protocol):
    def complete(self, prompt: str, *, domain_id: str, run_index: int, temperature: float) -> str:
        ...


class TranscriptReplayClient:
    """Replays saved responses from `<root>/<domain>/<run_index>.txt`.

    First-class offline backend: the whole planning path, including tests
    and CI, works without any network or API key.
    """

    def __init__(self, root: str | Path) -> None:
        self.root = Path(root)

    def complete(self, prompt: str, *, domain_id: str, run_index: int, temperature: float) -> str:
        path = self.root / domain_id / f"{run_index}.txt"
        try:
            return path.read_text()
        except OSError as exc:
            raise TransportError(f"no transcript at {path}: {exc}") from exc


class HttpChatClient:
    """Single-turn chat completion over HTTP.

    Sends {model, temperature, messages: [{role: "user", content}]} and reads
    the assistant text at a dotted response path (OpenAI-compatible default).
    Retries with exponential backoff; requests and responses are kept
    verbatim in `audit_log`.
    """

    def __init__(
        self,
        endpoint_url: str,
        model: str,
        api_key: str | None = None,
        response_path: str = "choices.0.message.content",
        max_attempts: int = 3,
        backoff: float = 0.5,
        timeout: float = 120.0,
    ) -> None:
        import httpx

        self.endpoint_url = endpoint_url
        self.model = model
        self.api_key = api_key if api_key is not None else os.environ.get(API_KEY_ENV)
        self.response_path = response_path
        self.max_attempts = max_attempts
        self.backoff = backoff
        self.audit_log: list[dict] = []
        self._client = httpx.Client(timeout=timeout)

    def _extract(self, body: object) -> str:
        node = body
        for part in self.response_path.split("."):
            if isinstance(node, list):
                node = node[int(part)]
            elif isinstance(node, dict):
                node = node[part]
            else:
                raise TransportError(f"response path {self.response_path!r} not found")
        if not isinstance(node, str):
            raise TransportError(f"response path {self.response_path!r} is not text")
        return node

    def complete(self, prompt: str, *, domain_id: str, run_index: int, temperature: float) -> str:
        import httpx

        payload = {
            "model": self.model,
            "temperature": temperature,
            "messages": [{"role": "user", "content": prompt}],
        }
        headers = {}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        last_error: Exception | None = None
        for attempt in range(self.max_attempts):
            if attempt:
                time.sleep(self.backoff * 2 ** (attempt - 1))
            try:
                response = self._client.post(self.endpoint_url, json=payload, headers=headers)
                self.audit_log.append(
                    {
                        "domain_id": domain_id,
                        "run_index": run_index,
                        "attempt": attempt,
                        "request": payload,
                        "status": response.status_code,
                        "response": response.text,
                    }
                )
                if response.status_code >= 500:
                    last_error = TransportError(f"HTTP {response.status_code}")
                    continue
                if response.status_code != 200:
                    raise TransportError(
                        f"chat endpoint returned HTTP {response.status_code}: {response.text[:200]}"
                    )
                return self._extract(response.json())
            except httpx.HTTPError as exc:
                log.warning("chat request attempt %d failed: %s", attempt + 1, exc)
                last_error = exc
        raise TransportError(
            f"chat endpoint failed after {self.max_attempts} attempts: {last_error}"
        )
