"""Shared fixtures and generators for the test suite.

The recurring hand-checkable setting is a four-feature classifier whose
per-value weights are (1, 2, 3) with bias -7: an instance taking the top
value everywhere has margin 5, exactly 50 of the 81 points are predicted
positive, and fixing features 2 and 4 (0-based: 1 and 3) at values 1 and 3
leaves 6 positive completions.  Those counts were verified by independent
enumeration before being frozen here.
"""

from __future__ import annotations

import math
import random

import pytest

from nbxplain import Dataset, FeatureSpec, NbcModel, Xlc, quantize, train


@pytest.fixture
def knap4_xlc() -> Xlc:
    return Xlc(bias=-7.0, weights=((1.0, 2.0, 3.0),) * 4)


@pytest.fixture
def knap4_qk(knap4_xlc):
    return quantize(knap4_xlc, decimals=0)


@pytest.fixture
def knap4_model() -> NbcModel:
    """A model whose linear reduction is exactly the knap4 classifier.

    The negative class gets all-zero logs and the positive class carries the
    weights, so the class-log differences reproduce bias -7 and per-value
    weights 1, 2, 3.  The logs are not normalized probabilities, which the
    model type permits for imported models.
    """
    features = tuple(
        FeatureSpec(f"x{i + 1}", ("1", "2", "3")) for i in range(4)
    )
    return NbcModel(
        features=features,
        classes=("neg", "pos"),
        log_prior=(0.0, -7.0),
        log_likelihood=tuple(
            tuple((0.0, float(k + 1)) for k in range(3)) for _ in range(4)
        ),
    )


@pytest.fixture
def tiny_trained_model() -> NbcModel:
    """Trained on rows (a,pos), (a,pos), (b,neg), (a,neg): the smoothed
    estimates are P(pos)=1/2, P(a|pos)=3/4, P(a|neg)=1/2."""
    features = (FeatureSpec("f", ("a", "b")),)
    rows = (((0,), 1), ((0,), 1), ((1,), 0), ((0,), 0))
    return train(Dataset(features, ("neg", "pos"), rows), alpha=1.0)


def make_random_dataset(
    rng: random.Random,
    num_features: int,
    max_domain: int = 4,
    num_rows: int = 40,
) -> Dataset:
    """A dataset with both classes present, labels from a noisy linear rule."""
    sizes = [rng.randint(2, max_domain) for _ in range(num_features)]
    features = tuple(
        FeatureSpec(f"f{i}", tuple(f"v{k}" for k in range(d)))
        for i, d in enumerate(sizes)
    )
    coef = [rng.uniform(-1.5, 1.5) for _ in range(num_features)]
    rows = []
    for _ in range(num_rows):
        x = tuple(rng.randrange(d) for d in sizes)
        score = sum(c * (x[i] / (sizes[i] - 1) - 0.5) for i, c in enumerate(coef))
        p = 1 / (1 + math.exp(-3.0 * score))
        rows.append((x, 1 if rng.random() < p else 0))
    labels = {label for _, label in rows}
    if len(labels) < 2:
        rows[0] = (rows[0][0], 1 - rows[0][1])
    return Dataset(features, ("neg", "pos"), tuple(rows))


def make_trained_model(rng: random.Random, num_features: int, **kw) -> NbcModel:
    return train(make_random_dataset(rng, num_features, **kw))


def make_random_xlc(
    rng: random.Random, num_features: int, max_domain: int = 4, span: int = 10
) -> Xlc:
    sizes = [rng.randint(1, max_domain) for _ in range(num_features)]
    return Xlc(
        bias=float(rng.randint(-3 * span, 3 * span)),
        weights=tuple(
            tuple(float(rng.randint(-span, span)) for _ in range(d)) for d in sizes
        ),
    )


def positively_predicted_instance(model: NbcModel, rng: random.Random):
    """A random instance together with its oriented classifier and profile;
    skips margin-zero points (nothing entails a tied prediction)."""
    from nbxplain import orient, reduce_model, slack

    xlc = reduce_model(model)
    for _ in range(200):
        v = tuple(rng.randrange(spec.size) for spec in model.features)
        oriented, explained_class = orient(xlc, v)
        profile = slack(oriented, v)
        if profile.gamma > 0:
            return v, oriented, explained_class, profile
    return None
