"""Teacher backends: canned, scripted oracle over the engine, and remote chat.

The scripted oracle derives gold segmentations from the suite's milestone
labels and can corrupt them (drops, spurious insertions, garbled replies)
under a fixed seed, standing in for a noisy large-model annotator. The
remote backend speaks the {model, messages, temperature} chat protocol.
"""

from __future__ import annotations

import logging
import random
import threading
import time
from dataclasses import dataclass, field

import requests

from ..engine.engine import Engine, stable_seed
from ..engine.expert import expert_trajectory, gold_segments
from ..engine.suite import substitute
from ..errors import TeacherTransportError
from ..subgoals import SubGoal

logger = logging.getLogger(__name__)

DEFAULT_TOKEN_ENV = "SUBQUEST_API_TOKEN"


@dataclass(frozen=True)
class TeacherRequest:
    system_preamble: str
    examples: tuple[str, ...]
    query: str
    temperature: float = 0.0

    def messages(self) -> list[dict]:
        user = "\n\n".join((*self.examples, self.query))
        return [
            {"role": "system", "content": self.system_preamble},
            {"role": "user", "content": user},
        ]


@dataclass(frozen=True)
class TeacherResponse:
    text: str


class TeacherBackend:
    """Interface: complete(request) -> TeacherResponse."""

    def complete(self, request: TeacherRequest) -> TeacherResponse:
        raise NotImplementedError


def teacher_complete(request: TeacherRequest, backend: TeacherBackend) -> TeacherResponse:
    return backend.complete(request)


class MockTeacher(TeacherBackend):
    """Replays canned responses in order, repeating the last one."""

    def __init__(self, responses: list[str]):
        if not responses:
            raise ValueError("at least one canned response required")
        self.responses = list(responses)
        self.requests: list[TeacherRequest] = []

    def complete(self, request: TeacherRequest) -> TeacherResponse:
        self.requests.append(request)
        index = min(len(self.requests) - 1, len(self.responses) - 1)
        return TeacherResponse(self.responses[index])


@dataclass(frozen=True)
class CorruptionSpec:
    drop_rate: float = 0.0
    insert_rate: float = 0.0
    garble_rate: float = 0.0
    seed: int = 0


class ScriptedOracleTeacher(TeacherBackend):
    """Answers annotation queries from the suite's gold segmentations.

    Deterministic for a fixed seed; retries of the same query see a fresh
    corruption draw, the way a resampled model reply would differ.
    """

    def __init__(self, engine: Engine, corruption: CorruptionSpec | None = None):
        self.engine = engine
        self.corruption = corruption or CorruptionSpec()
        self.calls = 0
        self._attempts: dict[str, int] = {}
        # A description names a task but not a variation; queries are
        # disambiguated against the trajectory they carry.
        self._by_description: dict[str, list[tuple[str, int]]] = {}
        self._gold: dict[tuple[str, int], list[tuple[SubGoal, list[str]]]] = {}
        self._expert: dict[tuple[str, int], list[str]] = {}
        for task in engine.suite:
            for vid, variation in enumerate(task.variations):
                desc = substitute(task.description_template, variation.params)
                self._by_description.setdefault(desc, []).append((task.task_type_id, vid))

    def _materialize(self, key: tuple[str, int]) -> None:
        if key in self._gold:
            return
        task = self.engine.task(key[0])
        trajectory = expert_trajectory(self.engine, task, key[1])
        self._gold[key] = gold_segments(trajectory)
        self._expert[key] = [a.surface for a, _ in trajectory]

    def complete(self, request: TeacherRequest) -> TeacherResponse:
        from .prompts import GOAL_PATH_PREFIX, render_segments

        self.calls += 1
        query = request.query
        attempt = self._attempts.get(query, 0)
        self._attempts[query] = attempt + 1
        rng = random.Random(
            stable_seed(self.corruption.seed, query, attempt)
        )

        try:
            desc = query.split("[Task Description] ", 1)[1].split(".\n[Expert trajectory]", 1)[0]
            path = query.split(GOAL_PATH_PREFIX, 1)[1].splitlines()[0]
        except IndexError:
            return TeacherResponse("I do not understand the request.")
        actions = [a.strip() for a in path.split(", ") if a.strip()]
        candidates = self._by_description.get(desc)
        if not candidates:
            return TeacherResponse("I do not recognize this task.")

        if rng.random() < self.corruption.garble_rate:
            return TeacherResponse("Sorry, I cannot lay out the sub-tasks for this.")

        full_match = span_match = None
        for key in candidates:
            self._materialize(key)
            expert = self._expert[key]
            if actions == expert:
                full_match = key
                break
            if span_match is None and self._find_span(expert, actions) is not None:
                span_match = key
        if full_match is not None:
            segments = self._corrupt(self._gold[full_match], self._expert[full_match], rng)
        else:
            key = span_match if span_match is not None else candidates[0]
            segments = [(self._label_for_span(key, actions), tuple(actions))]
        rendered = render_segments(tuple(segments))
        return TeacherResponse(rendered)

    @staticmethod
    def _find_span(expert: list[str], actions: list[str]) -> int | None:
        for start in range(len(expert) - len(actions) + 1):
            if expert[start:start + len(actions)] == actions:
                return start
        return None

    def _label_for_span(self, key: tuple[str, int], actions: list[str]) -> SubGoal:
        expert = self._expert[key]
        labels: list[SubGoal] = []
        for segment_subgoal, segment_actions in self._gold[key]:
            labels.extend([segment_subgoal] * len(segment_actions))
        span_start = self._find_span(expert, actions)
        if span_start is None:
            # Unknown span: vote by per-action membership.
            votes = [l for a in actions for l, la in zip(labels, expert) if la == a]
            return votes[0] if votes else SubGoal("unknown_subtask", ())
        span_labels = labels[span_start:span_start + len(actions)]
        counts: dict[str, int] = {}
        for label in span_labels:
            counts[label.surface] = counts.get(label.surface, 0) + 1
        best = max(counts.values())
        for label in span_labels:
            if counts[label.surface] == best:
                return label
        return span_labels[0]

    def _corrupt(
        self,
        gold: list[tuple[SubGoal, list[str]]],
        expert: list[str],
        rng: random.Random,
    ) -> list[tuple[SubGoal, tuple[str, ...]]]:
        spec = self.corruption
        out: list[tuple[SubGoal, tuple[str, ...]]] = []
        for subgoal, actions in gold:
            kept: list[str] = []
            for action in actions:
                if rng.random() >= spec.drop_rate:
                    kept.append(action)
                if rng.random() < spec.insert_rate:
                    kept.append(action if rng.random() < 0.5 else rng.choice(expert))
            out.append((subgoal, tuple(kept)))
        return out


class ChatCompletionClient:
    """Minimal chat-completions client with retry, backoff, and an
    in-flight cap. The auth token is read from an environment variable."""

    def __init__(
        self,
        endpoint_url: str,
        model: str,
        *,
        token_env: str = DEFAULT_TOKEN_ENV,
        max_retries: int = 3,
        backoff: float = 0.5,
        timeout: float = 30.0,
        max_in_flight: int = 4,
    ):
        self.endpoint_url = endpoint_url
        self.model = model
        self.token_env = token_env
        self.max_retries = max_retries
        self.backoff = backoff
        self.timeout = timeout
        self._gate = threading.Semaphore(max_in_flight)

    def complete_messages(self, messages: list[dict], temperature: float = 0.0) -> str:
        import os

        headers = {"Content-Type": "application/json"}
        token = os.environ.get(self.token_env)
        if token:
            headers["Authorization"] = f"Bearer {token}"
        body = {"model": self.model, "messages": messages, "temperature": temperature}

        attempts = 0
        last_error = "no attempt made"
        while attempts < self.max_retries:
            attempts += 1
            try:
                with self._gate:
                    response = requests.post(
                        self.endpoint_url, json=body, headers=headers, timeout=self.timeout
                    )
                if response.status_code >= 500:
                    last_error = f"server error {response.status_code}"
                elif response.status_code != 200:
                    raise TeacherTransportError(
                        f"endpoint rejected request: {response.status_code}", attempts=attempts
                    )
                else:
                    payload = response.json()
                    try:
                        return payload["choices"][0]["message"]["content"]
                    except (KeyError, IndexError, TypeError) as exc:
                        raise TeacherTransportError(
                            f"malformed completion payload: {exc}", attempts=attempts
                        ) from exc
            except requests.RequestException as exc:
                last_error = str(exc)
            if attempts < self.max_retries:
                time.sleep(self.backoff * (2 ** (attempts - 1)))
        raise TeacherTransportError(
            f"transport failed after {attempts} attempts: {last_error}", attempts=attempts
        )


@dataclass
class RemoteTeacher(TeacherBackend):
    """Teacher over the chat wire protocol; always sends temperature 0."""

    client: ChatCompletionClient
    requests_made: int = field(default=0)

    def complete(self, request: TeacherRequest) -> TeacherResponse:
        self.requests_made += 1
        text = self.client.complete_messages(request.messages(), temperature=request.temperature)
        return TeacherResponse(text)
