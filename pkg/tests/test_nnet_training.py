"""Loss, BPTT bookkeeping, the optimizer step, and the training loop."""

import math

import numpy as np
import pytest

from declfix.astnodes import NodeKind
from declfix.encoding import TrainingPair, Vocabulary, compose
from declfix.errors import EmptyDataset
from declfix.nnet.model import (
    SINGLE_HEAD,
    THREE_HEAD,
    DeclarationModel,
    ModelConfig,
)
from declfix.nnet.training import (
    LOG_CLAMP,
    RmspropState,
    batch_loss_and_grads,
    build_examples,
    cross_entropy,
    train,
    training_key_recall,
)

ID = NodeKind.ID.value
DECL = NodeKind.Decl.value
TYPEDECL = NodeKind.TypeDecl.value
ITYPE = NodeKind.IdentifierType.value
DATATYPE = 111111


def paired_vocab(n_ids=4):
    """Synthetic vocabulary with one declaration triple per identifier."""
    vocab = Vocabulary()

    def add(code):
        if code not in vocab.entries:
            vocab.entries[code] = len(vocab.entries)
        return code

    for i in range(n_ids):
        term = 200000 + i
        ident = add(compose(ID, term))
        triple = (
            add(compose(DECL, term)),
            add(compose(TYPEDECL, term)),
            add(compose(ITYPE, DATATYPE)),
        )
        vocab.pairs.append(TrainingPair(ident, triple))
    return vocab


def small_config(**overrides):
    base = dict(embedding_dim=8, hidden_units=8, dropout=0.0, rng_seed=7,
                epochs=3, batch_size=4, split_fraction=1.0)
    base.update(overrides)
    return ModelConfig.desk_scale(**base)


# ---------------------------------------------------------------- loss

def _logsumexp(row):
    m = max(row)
    return m + math.log(sum(math.exp(v - m) for v in row))


def test_cross_entropy_matches_logsumexp_identity():
    # -log softmax(x)[t] == logsumexp(x) - x[t], computed without softmax
    rng = np.random.default_rng(0)
    logits = [rng.normal(size=(3, 5)) * 4, rng.normal(size=(3, 5)) * 4]
    targets = rng.integers(0, 5, size=(3, 2))
    loss, _ = cross_entropy(logits, targets)
    expected = 0.0
    for j, block in enumerate(logits):
        for b in range(3):
            row = list(block[b])
            expected += _logsumexp(row) - row[targets[b, j]]
    assert loss == pytest.approx(expected, rel=1e-12)


def test_cross_entropy_gradient_rows_sum_to_zero():
    rng = np.random.default_rng(1)
    logits = [rng.normal(size=(4, 6))]
    targets = rng.integers(0, 6, size=(4, 1))
    _, dlogits = cross_entropy(logits, targets)
    assert np.allclose(dlogits[0].sum(axis=1), 0.0, atol=1e-12)


def test_cross_entropy_gradient_matches_finite_differences():
    rng = np.random.default_rng(2)
    base = [rng.normal(size=(2, 4)), rng.normal(size=(2, 4))]
    targets = rng.integers(0, 4, size=(2, 2))
    _, dlogits = cross_entropy(base, targets)
    eps = 1e-6
    for j in range(2):
        for b in range(2):
            for v in range(4):
                up = [blk.copy() for blk in base]
                dn = [blk.copy() for blk in base]
                up[j][b, v] += eps
                dn[j][b, v] -= eps
                lu, _ = cross_entropy(up, targets)
                ld, _ = cross_entropy(dn, targets)
                fd = (lu - ld) / (2 * eps)
                assert fd == pytest.approx(dlogits[j][b, v], abs=1e-8)


def test_loss_stays_finite_when_target_probability_underflows():
    # a 1000-unit logit gap drives the picked softmax entry to exactly 0.0
    logits = [np.array([[0.0, 1000.0]])]
    targets = np.array([[0]])
    loss, _ = cross_entropy(logits, targets)
    assert math.isfinite(loss)
    assert loss == pytest.approx(-math.log(LOG_CLAMP))


def test_loss_sums_over_batch_and_heads():
    logits = np.log(np.array([[0.25, 0.75], [0.5, 0.5]]))
    targets = np.array([[1, 0], [0, 1]])
    loss, _ = cross_entropy([logits, logits], targets)
    expected = -(math.log(0.75) + math.log(0.5) + math.log(0.25) + math.log(0.5))
    assert loss == pytest.approx(expected, rel=1e-12)


# ---------------------------------------------------------------- optimizer

def test_rmsprop_first_step_hand_computed():
    vocab = paired_vocab(3)
    config = small_config()
    model = DeclarationModel(config, vocab)
    before = {name: p.copy() for name, p in model.named_params()}
    grads = {name: np.full_like(p, 0.5) for name, p in model.named_params()}

    opt = RmspropState(model)
    opt.update(model, grads)

    # v starts at zero: v1 = (1-rho) g^2, theta1 = theta0 - lr g / sqrt(v1+eps)
    rho, eps, lr = config.rmsprop_rho, config.rmsprop_eps, config.learning_rate
    v1 = (1.0 - rho) * 0.25
    step = lr * 0.5 / math.sqrt(v1 + eps)
    for name, p in model.named_params():
        assert np.allclose(p, before[name] - step, atol=1e-15)


def test_rmsprop_accumulates_across_steps():
    vocab = paired_vocab(3)
    config = small_config()
    model = DeclarationModel(config, vocab)
    g1 = {name: np.full_like(p, 0.5) for name, p in model.named_params()}
    g2 = {name: np.full_like(p, -0.2) for name, p in model.named_params()}
    snap = {name: p.copy() for name, p in model.named_params()}

    opt = RmspropState(model)
    opt.update(model, g1)
    opt.update(model, g2)

    rho, eps, lr = config.rmsprop_rho, config.rmsprop_eps, config.learning_rate
    v1 = (1.0 - rho) * 0.25
    v2 = rho * v1 + (1.0 - rho) * 0.04
    expect = snap["lstm0.Uf"] - lr * 0.5 / math.sqrt(v1 + eps) \
        + lr * 0.2 / math.sqrt(v2 + eps)
    assert np.allclose(dict(model.named_params())["lstm0.Uf"], expect, atol=1e-14)
    assert np.allclose(opt.v["lstm0.Uf"], v2, atol=1e-16)


def test_rmsprop_update_is_in_place():
    vocab = paired_vocab(2)
    model = DeclarationModel(small_config(), vocab)
    handles = [p for _, p in model.named_params()]
    grads = {name: np.ones_like(p) for name, p in model.named_params()}
    RmspropState(model).update(model, grads)
    for handle, (_, current) in zip(handles, model.named_params()):
        assert handle is current


# ---------------------------------------------------------------- examples

def test_build_examples_three_head_one_per_pair():
    vocab = paired_vocab(3)
    config = small_config()
    assert config.prediction_mode == THREE_HEAD
    examples = build_examples(config, vocab)
    assert len(examples) == 3
    for pair, (inp, tgt) in zip(vocab.pairs, examples):
        assert inp == vocab.index_of(pair.input_code)
        assert tgt == tuple(vocab.index_of(c) for c in pair.targets)


def test_build_examples_single_head_chains_the_triple():
    vocab = paired_vocab(2)
    config = small_config(prediction_mode=SINGLE_HEAD)
    examples = build_examples(config, vocab)
    # each pair unrolls to ID->Decl, Decl->TypeDecl, TypeDecl->IdentifierType
    assert len(examples) == 6
    pair = vocab.pairs[0]
    chain = [vocab.index_of(pair.input_code)] + \
        [vocab.index_of(c) for c in pair.targets]
    assert examples[0] == (chain[0], (chain[1],))
    assert examples[1] == (chain[1], (chain[2],))
    assert examples[2] == (chain[2], (chain[3],))
    for _, tgt in examples:
        assert len(tgt) == 1


# ---------------------------------------------------------------- train loop

def test_train_rejects_multi_token_sequences():
    vocab = paired_vocab(2)
    with pytest.raises(ValueError):
        train(small_config(seq_len=2), vocab)


def test_train_rejects_empty_corpus():
    with pytest.raises(EmptyDataset):
        train(small_config(), Vocabulary())


def test_training_key_recall_rejects_empty_vocab():
    vocab = paired_vocab(2)
    model = DeclarationModel(small_config(), vocab)
    with pytest.raises(EmptyDataset):
        training_key_recall(model, Vocabulary())


def test_train_is_deterministic_for_a_fixed_seed():
    vocab = paired_vocab(4)
    config = small_config(epochs=5, dropout=0.5)
    a = train(config, vocab)
    b = train(small_config(epochs=5, dropout=0.5), vocab)
    assert a.loss_history == b.loss_history
    pa = dict(a.model.named_params())
    for name, p in b.model.named_params():
        assert np.array_equal(pa[name], p)


def test_train_seed_changes_the_run():
    vocab = paired_vocab(4)
    a = train(small_config(epochs=4, rng_seed=1), vocab)
    b = train(small_config(epochs=4, rng_seed=2), vocab)
    assert a.loss_history != b.loss_history


def test_loss_history_has_one_entry_per_epoch_and_decreases():
    vocab = paired_vocab(4)
    result = train(small_config(epochs=40), vocab)
    assert len(result.loss_history) == 40
    assert result.loss_history[-1] < result.loss_history[0]
    assert all(math.isfinite(v) for v in result.loss_history)


def test_split_counts_follow_the_rounded_fraction():
    vocab = paired_vocab(10)  # 10 three-head examples
    result = train(small_config(epochs=1, split_fraction=0.8), vocab)
    assert result.train_count == 8
    assert result.test_count == 2
    assert result.test_loss is not None and math.isfinite(result.test_loss)


def test_full_split_trains_on_everything_and_skips_test_loss():
    vocab = paired_vocab(5)
    result = train(small_config(epochs=1, split_fraction=1.0), vocab)
    assert result.train_count == 5
    assert result.test_count == 0
    assert result.test_loss is None


def test_tiny_split_keeps_at_least_one_training_example():
    vocab = paired_vocab(6)
    result = train(small_config(epochs=1, split_fraction=0.01), vocab)
    assert result.train_count == 1
    assert result.test_count == 5


def test_first_epoch_loss_replays_by_hand():
    # single batch, no dropout: epoch 0's mean loss must equal the loss of
    # the shuffled full batch under the freshly initialized parameters
    vocab = paired_vocab(4)
    config = small_config(epochs=1, batch_size=8)
    result = train(config, vocab)

    rng = np.random.default_rng(config.rng_seed)
    replica = DeclarationModel(config, vocab, rng=rng)
    examples = build_examples(config, vocab)
    order = rng.permutation(len(examples))
    train_set = [examples[i] for i in order]
    perm = rng.permutation(len(train_set))
    chunk = [train_set[i] for i in perm]
    idx = np.asarray([[ex[0]] for ex in chunk], dtype=np.int64)
    targets = np.asarray([ex[1] for ex in chunk], dtype=np.int64)
    loss, _ = batch_loss_and_grads(replica, idx, targets, rng=rng)
    assert result.loss_history[0] == pytest.approx(loss / len(train_set), rel=1e-12)


def test_progress_callback_sees_every_epoch():
    vocab = paired_vocab(3)
    seen = []
    result = train(small_config(epochs=4), vocab,
                   progress=lambda e, l: seen.append((e, l)))
    assert [e for e, _ in seen] == [0, 1, 2, 3]
    assert [l for _, l in seen] == result.loss_history


def test_small_corpus_is_memorized_with_full_recall():
    vocab = paired_vocab(3)
    config = small_config(embedding_dim=16, hidden_units=16, epochs=400,
                          rng_seed=11)
    result = train(config, vocab)
    assert training_key_recall(result.model, vocab) == 1.0


def test_recall_is_a_fraction_before_training():
    vocab = paired_vocab(5)
    model = DeclarationModel(small_config(), vocab)
    recall = training_key_recall(model, vocab)
    assert 0.0 <= recall <= 1.0
