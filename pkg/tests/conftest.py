from __future__ import annotations

import random

import pytest

from cranno import fixtures
from cranno.corpus import Corpus, Dialogue, Turn, TurnKind
from cranno.errors import IllegalAnswerError
from cranno.recipe import GP_TAGS, Session, apply_answer, next_prompt, start_session


@pytest.fixture
def fragment() -> Corpus:
    return fixtures.fragment_corpus()


@pytest.fixture
def golden(fragment) -> Session:
    return fixtures.golden_session()


def make_dialogue(dialogue_id: str, n_turns: int, rng: random.Random) -> Dialogue:
    turns = []
    for i in range(n_turns):
        speaker = rng.choice(("DG", "DF"))
        kind = rng.choice((TurnKind.UTTERANCE, TurnKind.ACTION, TurnKind.MIXED))
        text = f"turn {i} text" if kind is not TurnKind.ACTION else ""
        note = f"does thing {i}" if kind is not TurnKind.UTTERANCE else None
        turns.append(
            Turn(dialogue_id=dialogue_id, index=i, speaker=speaker, kind=kind,
                 text=text, action_note=note)
        )
    return Dialogue(dialogue_id=dialogue_id, turns=tuple(turns))


def random_corpus(rng: random.Random, max_turns: int = 8) -> Corpus:
    dialogue = make_dialogue("d0", rng.randint(1, max_turns), rng)
    return Corpus(corpus_id="random", dialogues=(dialogue,))


def random_answer(rng: random.Random, answers: tuple[str, ...]) -> str:
    # Bias toward yes/no over the long evidence option tail so walks stay
    # varied but still exercise evidence events.
    if "none" in answers and rng.random() < 0.5:
        return "none"
    return rng.choice(answers)


def random_session_walk(rng: random.Random, corpus: Corpus,
                        stop_probability: float = 0.05) -> Session:
    """Drive a session with random legal answers; may stop early."""
    dialogue_id = corpus.dialogues[0].dialogue_id
    session = start_session(corpus, dialogue_id, f"rng{rng.randint(0, 999)}")
    while not session.finished:
        if rng.random() < stop_probability:
            break
        prompt = next_prompt(session)
        answer = random_answer(rng, prompt.answers)
        if answer in ("yes", "no") and rng.random() < 0.15:
            try:
                session = apply_answer(session, answer,
                                       gp_tag=rng.choice(GP_TAGS))
                continue
            except IllegalAnswerError:
                pass
        session = apply_answer(session, answer)
    return session
