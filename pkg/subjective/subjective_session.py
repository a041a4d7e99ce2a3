"""
План сессии по методу двойного стимула (DS)

Каждая пара: эталон 10 с -> серый 3 с -> тест 10 с -> серый/голосование 4 с.
Тренировочные и пробные (dummy) пары идут первыми, их оценки отбрасываются.
"""
from typing import List, Optional, Sequence

import numpy as np

from core.core_logger import get_logger
from core.core_exceptions import ValidationException
from subjective.subjective_types import EventKind, SessionEvent, SessionPlan

logger = get_logger(__name__)

REFERENCE_SECONDS = 10.0
GRAY_SECONDS = 3.0
TEST_SECONDS = 10.0
VOTE_SECONDS = 4.0


def pair_events(clip_id: str, discard: bool = False, training: bool = False) -> List[SessionEvent]:
    """События одной пары эталон/тест"""
    return [
        SessionEvent(EventKind.REFERENCE, REFERENCE_SECONDS, clip_id, discard, training),
        SessionEvent(EventKind.GRAY, GRAY_SECONDS, clip_id, discard, training),
        SessionEvent(EventKind.TEST, TEST_SECONDS, clip_id, discard, training),
        SessionEvent(EventKind.VOTE, VOTE_SECONDS, clip_id, discard, training),
    ]


def make_session_plan(clips: Sequence[str], dummy_count: int = 0, seed: Optional[int] = None,
                      training_clips: Sequence[str] = ()) -> SessionPlan:
    """
    План сессии: тренировка, пробные пары, затем клипы в случайном порядке.

    Пробные пары берутся из начала перемешанного списка клипов.
    """
    if not clips:
        raise ValidationException("Список клипов пуст")
    if dummy_count < 0:
        raise ValidationException(f"Число пробных пар не может быть отрицательным: {dummy_count}")

    rng = np.random.default_rng(seed)
    order = [clips[i] for i in rng.permutation(len(clips))]

    events: List[SessionEvent] = []
    for clip_id in training_clips:
        events.extend(pair_events(clip_id, discard=True, training=True))
    for i in range(dummy_count):
        events.extend(pair_events(order[i % len(order)], discard=True))
    for clip_id in order:
        events.extend(pair_events(clip_id))

    plan = SessionPlan(events=events, dummy_count=dummy_count, training_count=len(training_clips), seed=seed)
    logger.info(f"✅ План сессии: {len(clips)} клипов, {dummy_count} пробных, {plan.total_duration:.0f} с")
    return plan
