"""Training loop: cross-entropy loss, backpropagation through time, RMSprop.

Gradients are summed over the batch, not averaged.  Duplicating an example
in a batch therefore doubles its gradient contribution, and the finite
difference oracle in the tests differences the same summed loss.

The log inside the loss is clamped at 1e-12 so a zero probability cannot
produce an infinite loss; the clamp guards the reported value only, the
softmax/cross-entropy gradient shortcut is unaffected at any probability
the clamp realistically sees.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import EmptyDataset
from . import kernels
from .model import SINGLE_HEAD, THREE_HEAD, DeclarationModel

LOG_CLAMP = 1e-12


def cross_entropy(logits_list, targets):
    """Summed loss over batch and heads, plus d(loss)/d(logits) per head.

    logits_list: one (B, V) array per head.  targets: (B, num_heads) dense
    indices.  Loss for one example and head is -log(softmax(logits)[target]).
    """
    targets = np.asarray(targets, dtype=np.int64)
    B = targets.shape[0]
    rows = np.arange(B)
    total = 0.0
    dlogits = []
    for j, logits in enumerate(logits_list):
        probs = kernels.softmax_rows(logits)
        picked = probs[rows, targets[:, j]]
        total += float(-np.log(np.maximum(picked, LOG_CLAMP)).sum())
        d = probs.copy()
        d[rows, targets[:, j]] -= 1.0
        dlogits.append(d)
    return total, dlogits


def backward_batch(model, cache, dlogits):
    """BPTT over the cached forward pass; returns {param name: gradient}."""
    cfg = model.config
    grads = {name: np.zeros_like(p) for name, p in model.named_params()}
    h_top = cache["h_top"]
    d_top = np.zeros_like(h_top)
    for j, head in enumerate(model.heads):
        grads[f"head{j}.M"] += dlogits[j].T @ h_top
        grads[f"head{j}.b"] += dlogits[j].sum(axis=0)
        d_top += dlogits[j] @ head.M

    idx = cache["idx"]
    T = len(cache["x"])
    L = cfg.num_lstm_layers
    B, H = h_top.shape
    dh_rec = [np.zeros((B, H)) for _ in range(L)]
    ds_rec = [np.zeros((B, H)) for _ in range(L)]
    emb_T = grads["embedding"].T  # (V, K) view, rows are vocabulary slots

    for t in reversed(range(T)):
        d_out = [None] * L
        d_out[L - 1] = d_top if t == T - 1 else np.zeros((B, H))
        for li in reversed(range(L)):
            layer = model.layers[li]
            step = cache["layers"][li][t]
            mask = cache["masks"][li][t]
            dh = d_out[li] if mask is None else d_out[li] * mask
            dh = dh + dh_rec[li]
            dzf, dzg, dzc, dzo, ds_prev = kernels.lstm_gates_backward(
                dh, ds_rec[li],
                step["f"], step["g"], step["c"], step["q"],
                step["s"], step["s_prev"], cfg.candidate_tanh,
            )
            inp, h_prev = step["inp"], step["h_prev"]
            pre = f"lstm{li}"
            for gate, dz in (("f", dzf), ("g", dzg), ("c", dzc), ("o", dzo)):
                grads[f"{pre}.U{gate}"] += dz.T @ inp
                grads[f"{pre}.W{gate}"] += dz.T @ h_prev
                grads[f"{pre}.b{gate}"] += dz.sum(axis=0)
            d_inp = dzf @ layer.Uf + dzg @ layer.Ug + dzc @ layer.Uc + dzo @ layer.Uo
            dh_rec[li] = dzf @ layer.Wf + dzg @ layer.Wg + dzc @ layer.Wc + dzo @ layer.Wo
            ds_rec[li] = ds_prev
            if li > 0:
                d_out[li - 1] = d_inp
            else:
                cols = idx[:, t]
                valid = cols >= 0
                if valid.any():
                    np.add.at(emb_T, cols[valid], d_inp[valid])
    return grads


def batch_loss_and_grads(model, idx, targets, rng=None, train=True,
                         dropout_masks=None):
    logits, cache = model.run_batch(
        idx, train=train, rng=rng, dropout_masks=dropout_masks
    )
    loss, dlogits = cross_entropy(logits, targets)
    return loss, backward_batch(model, cache, dlogits)


class RmspropState:
    """Running squared-gradient averages, one slot per parameter."""

    def __init__(self, model):
        self.v = {name: np.zeros_like(p) for name, p in model.named_params()}

    def update(self, model, grads):
        cfg = model.config
        rho, eps, lr = cfg.rmsprop_rho, cfg.rmsprop_eps, cfg.learning_rate
        for name, param in model.named_params():
            g = grads[name]
            v = self.v[name]
            v *= rho
            v += (1.0 - rho) * g * g
            param -= lr * g / np.sqrt(v + eps)


def build_examples(config, vocab):
    """Turn the vocabulary's (ID -> declaration triple) pairs into dense
    index examples.  Three-head mode keeps the triple as one example; the
    single-head mode chains it into three consecutive-step examples."""
    examples = []
    for pair in vocab.pairs:
        in_idx = vocab.index_of(pair.input_code)
        tgt = [vocab.index_of(code) for code in pair.targets]
        if config.prediction_mode == THREE_HEAD:
            examples.append((in_idx, tuple(tgt)))
        else:
            chain = [in_idx] + tgt
            for a, b in zip(chain, chain[1:]):
                examples.append((a, (b,)))
    return examples


@dataclass
class TrainResult:
    model: DeclarationModel
    loss_history: list = field(default_factory=list)
    train_count: int = 0
    test_count: int = 0
    test_loss: float | None = None


def train(config, vocab, progress=None):
    """Fit a DeclarationModel on the vocabulary's training pairs.

    One seeded generator drives parameter init, the train/test shuffle,
    per-epoch shuffles and the dropout masks, so a (seed, corpus, config)
    triple reproduces the run exactly.  progress, when given, is called as
    progress(epoch, mean_loss) after every epoch.
    """
    config.validate()
    if config.seq_len != 1:
        raise ValueError("declaration pairs are single-token; seq_len must be 1")
    examples = build_examples(config, vocab)
    if not examples:
        raise EmptyDataset("the corpus produced no training pairs")

    rng = np.random.default_rng(config.rng_seed)
    model = DeclarationModel(config, vocab, rng=rng)

    order = rng.permutation(len(examples))
    n_train = int(round(config.split_fraction * len(examples)))
    n_train = min(max(n_train, 1), len(examples))
    train_set = [examples[i] for i in order[:n_train]]
    test_set = [examples[i] for i in order[n_train:]]

    opt = RmspropState(model)
    history = []
    B = config.batch_size
    for epoch in range(config.epochs):
        perm = rng.permutation(len(train_set))
        epoch_loss = 0.0
        for lo in range(0, len(train_set), B):
            chunk = [train_set[i] for i in perm[lo:lo + B]]
            idx = np.asarray([[ex[0]] for ex in chunk], dtype=np.int64)
            targets = np.asarray([ex[1] for ex in chunk], dtype=np.int64)
            loss, grads = batch_loss_and_grads(model, idx, targets, rng=rng)
            opt.update(model, grads)
            epoch_loss += loss
        mean_loss = epoch_loss / len(train_set)
        history.append(mean_loss)
        if progress is not None:
            progress(epoch, mean_loss)

    result = TrainResult(
        model=model, loss_history=history,
        train_count=len(train_set), test_count=len(test_set),
    )
    if test_set:
        idx = np.asarray([[ex[0]] for ex in test_set], dtype=np.int64)
        targets = np.asarray([ex[1] for ex in test_set], dtype=np.int64)
        logits, _ = model.run_batch(idx, train=False)
        loss, _ = cross_entropy(logits, targets)
        result.test_loss = loss / len(test_set)
    return result


def training_key_recall(model, vocab):
    """Fraction of distinct training inputs whose full predicted triple
    matches the recorded declaration chain."""
    from .model import predict_declaration

    wanted = {}
    for pair in vocab.pairs:
        wanted[pair.input_code] = tuple(pair.targets)
    if not wanted:
        raise EmptyDataset("no training pairs to score")
    hits = 0
    for id_code, targets in wanted.items():
        got = predict_declaration(model, vocab, id_code)
        if (got.decl_code, got.typedecl_code, got.identifiertype_code) == targets:
            hits += 1
    return hits / len(wanted)
