"""Hit counts from a live search engine over HTTP.

The engine is described by a URL template and the location of the hit count
in the JSON response.  The corpus size is a configured estimate.
"""

from __future__ import annotations

import json
import logging
import math
import re
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional
from urllib.parse import quote

import requests

from ..errors import CountParseError, HttpError, ParseError, ProviderError, ProviderTimeout
from .text import TermLike, as_term

logger = logging.getLogger(__name__)

DEFAULT_TIMEOUT = 10.0
_GROUPED_DOTS = re.compile(r"\d{1,3}(\.\d{3})+")
_SEPARATORS = str.maketrans("", "", ",_' \u00a0\u2009\u202f")


@dataclass(frozen=True)
class HttpProviderConfig:
    url_template: str
    count_path: str
    m_value: int
    min_request_interval: float = 0.0  # seconds
    and_operator: str = "+AND+"

    def __post_init__(self):
        if self.url_template.count("{query}") != 1:
            raise ValueError("url_template must contain exactly one '{query}' placeholder")
        if self.min_request_interval < 0:
            raise ValueError("min_request_interval must be >= 0")
        if isinstance(self.m_value, bool) or not isinstance(self.m_value, int) or self.m_value < 1:
            raise ValueError("m_value must be an integer >= 1")
        if self.count_path and not self.count_path.startswith("/"):
            raise ValueError("count_path must be a JSON pointer starting with '/'")

    @classmethod
    def from_json(cls, data: dict, source: str = "<config>") -> "HttpProviderConfig":
        """Decode the on-disk form, where ``min_request_interval`` is in milliseconds."""
        if not isinstance(data, dict):
            raise ParseError("top level must be an object", source)
        known = {"url_template", "count_path", "m_value", "min_request_interval", "and_operator"}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ParseError(f"unknown fields {unknown}", source)
        for key in ("url_template", "count_path", "m_value"):
            if key not in data:
                raise ParseError(f"missing field {key!r}", source)
        interval = data.get("min_request_interval", 0)
        if isinstance(interval, bool) or not isinstance(interval, (int, float)):
            raise ParseError("expected a number of milliseconds", f"{source}: min_request_interval")
        try:
            return cls(
                url_template=data["url_template"],
                count_path=data["count_path"],
                m_value=data["m_value"],
                min_request_interval=interval / 1000.0,
                and_operator=data.get("and_operator", "+AND+"),
            )
        except (ValueError, TypeError, AttributeError) as exc:
            raise ParseError(str(exc), source) from exc

    def to_json(self) -> dict:
        return {
            "url_template": self.url_template,
            "count_path": self.count_path,
            "m_value": self.m_value,
            "min_request_interval": self.min_request_interval * 1000.0,
            "and_operator": self.and_operator,
        }


def load_http_config(path) -> HttpProviderConfig:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"{path}: line {exc.lineno} column {exc.colno}") from exc
    return HttpProviderConfig.from_json(data, source=str(path))


def encode_query(query: str) -> str:
    return quote(query, safe="")


def build_url(config: HttpProviderConfig, encoded_query: str) -> str:
    return config.url_template.replace("{query}", encoded_query)


def resolve_pointer(document, pointer: str):
    """Follow an RFC 6901 JSON pointer; raises ``KeyError`` when it does not resolve."""
    if pointer == "":
        return document
    node = document
    for part in pointer[1:].split("/"):
        part = part.replace("~1", "/").replace("~0", "~")
        if isinstance(node, dict):
            if part not in node:
                raise KeyError(part)
            node = node[part]
        elif isinstance(node, list):
            if not part.isdigit() or int(part) >= len(node):
                raise KeyError(part)
            node = node[int(part)]
        else:
            raise KeyError(part)
    return node


def parse_count(value) -> int:
    """Interpret a hit-count field: integers, integral floats, or digit strings with separators."""
    if isinstance(value, bool):
        raise CountParseError(f"boolean is not a count: {value!r}")
    if isinstance(value, int):
        count = value
    elif isinstance(value, float):
        if not (math.isfinite(value) and value.is_integer()):
            raise CountParseError(f"not an integral count: {value!r}")
        count = int(value)
    elif isinstance(value, str):
        text = value.strip()
        if _GROUPED_DOTS.fullmatch(text):
            text = text.replace(".", "")
        text = text.translate(_SEPARATORS)
        if not text.isascii() or not text.isdigit():
            raise CountParseError(f"not a numeric count: {value!r}")
        count = int(text)
    else:
        raise CountParseError(f"not a numeric count: {value!r}")
    if count < 0:
        raise CountParseError(f"negative count: {value!r}")
    return count


def _fetch_encoded(config, encoded_query, session, timeout):
    url = build_url(config, encoded_query)
    try:
        response = (session or requests).get(url, timeout=timeout)
    except requests.Timeout as exc:
        raise ProviderTimeout(f"timed out after {timeout}s fetching {url}") from exc
    except requests.RequestException as exc:
        raise ProviderError(f"request to {url} failed: {exc}") from exc
    if not 200 <= response.status_code < 300:
        raise HttpError(response.status_code, url)
    try:
        body = response.json()
    except ValueError as exc:
        raise CountParseError(f"response from {url} is not JSON") from exc
    try:
        value = resolve_pointer(body, config.count_path)
    except KeyError as exc:
        raise CountParseError(f"count_path {config.count_path!r} not found in response from {url}") from exc
    return parse_count(value)


def http_fetch_count(config: HttpProviderConfig, query: str, *,
                     session: Optional[requests.Session] = None,
                     timeout: float = DEFAULT_TIMEOUT) -> int:
    """Issue one query and return the hit count.  Does not throttle."""
    return _fetch_encoded(config, encode_query(query), session, timeout)


class HttpCountProvider:
    """Throttled provider backed by a search engine.

    Requests are serialized and spaced at least ``min_request_interval``
    apart.  Occurrence answers are memoized for the provider's lifetime.
    Counts are estimates and may violate f(x, y) <= min(f(x), f(y)).
    """

    def __init__(self, config: HttpProviderConfig, *, session=None,
                 timeout: float = DEFAULT_TIMEOUT, clock=time.monotonic, sleep=time.sleep):
        self.config = config
        self.provider_id = f"http:{config.url_template}"
        self.timeout = timeout
        self.requests_made = 0
        self._session = session or requests.Session()
        self._clock = clock
        self._sleep = sleep
        self._lock = threading.Lock()
        self._last_request: Optional[float] = None
        self._occurrence = {}

    def corpus_size(self) -> int:
        return self.config.m_value

    def _term_query(self, term):
        return encode_query(" ".join(term.tokens))

    def _request(self, encoded_query):
        with self._lock:
            if self._last_request is not None:
                wait = self.config.min_request_interval - (self._clock() - self._last_request)
                if wait > 0:
                    self._sleep(wait)
            logger.debug("querying %s for %r", self.provider_id, encoded_query)
            try:
                return _fetch_encoded(self.config, encoded_query, self._session, self.timeout)
            finally:
                self._last_request = self._clock()
                self.requests_made += 1

    def occurrence(self, term: TermLike) -> int:
        term = as_term(term)
        if term.key not in self._occurrence:
            self._occurrence[term.key] = self._request(self._term_query(term))
        return self._occurrence[term.key]

    def cooccurrence(self, x: TermLike, y: TermLike) -> int:
        x, y = as_term(x), as_term(y)
        if x.key == y.key:
            return self.occurrence(x)
        if y.key < x.key:
            x, y = y, x
        return self._request(self._term_query(x) + self.config.and_operator + self._term_query(y))
