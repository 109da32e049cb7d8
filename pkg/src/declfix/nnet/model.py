"""The declaration-prediction model.

A token embedding, a stack of LSTM layers, and one softmax classifier per
predicted position, everything float64 and hand-rolled on numpy.  The cell
recurrence, written out once so every implementation detail is in view:

    f = sigmoid(b_f + U_f x + W_f h)          forget gate
    g = sigmoid(b_g + U_g x + W_g h)          input gate
    c = sigmoid(b_c + U_c x + W_c h)          candidate value (see below)
    s' = f * s + g * c                        new cell state
    q = sigmoid(b_o + U_o x + W_o h)          output gate
    h' = tanh(s') * q                         new hidden state

The candidate nonlinearity is a sigmoid, not the tanh most libraries use.
That is deliberate and load-bearing: with all-zero parameters the cell
must produce s' = 0.25 and h' = tanh(0.25) * 0.5, and the training
fixtures pin that behavior.  Set candidate_nonlinearity="tanh" for the
conventional cell.

Prediction maps an ID composite code to the three composite codes of the
declaration chain (Decl, TypeDecl, IdentifierType).  Default mode runs
three softmax heads off the shared LSTM trunk; "single" mode has one head
and chains its own argmax outputs instead (ID -> Decl -> TypeDecl ->
IdentifierType), three training examples per occurrence.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from ..encoding import one_hot
from ..errors import DimError, UnknownToken
from . import kernels

_INIT_SCALE = 0.08

THREE_HEAD = "three_head"
SINGLE_HEAD = "single"


@dataclass
class ModelConfig:
    embedding_dim: int = 512
    hidden_units: int = 512
    num_lstm_layers: int = 2
    dropout: float = 0.5
    seq_len: int = 1
    batch_size: int = 3
    learning_rate: float = 0.01
    rmsprop_rho: float = 0.9
    rmsprop_eps: float = 1e-8
    split_fraction: float = 0.8
    epochs: int = 100
    rng_seed: int = 0
    candidate_nonlinearity: str = "sigmoid"
    prediction_mode: str = THREE_HEAD

    def validate(self):
        if self.embedding_dim < 1 or self.hidden_units < 1:
            raise ValueError("embedding_dim and hidden_units must be positive")
        if self.num_lstm_layers < 1:
            raise ValueError("need at least one LSTM layer")
        if not 0.0 <= self.dropout < 1.0:
            raise ValueError("dropout must lie in [0, 1)")
        if self.seq_len < 1 or self.batch_size < 1 or self.epochs < 1:
            raise ValueError("seq_len, batch_size and epochs must be positive")
        if not 0.0 < self.split_fraction <= 1.0:
            raise ValueError("split_fraction must lie in (0, 1]")
        if self.candidate_nonlinearity not in ("sigmoid", "tanh"):
            raise ValueError("candidate_nonlinearity must be 'sigmoid' or 'tanh'")
        if self.prediction_mode not in (THREE_HEAD, SINGLE_HEAD):
            raise ValueError(f"unknown prediction_mode {self.prediction_mode!r}")
        return self

    @classmethod
    def desk_scale(cls, **overrides):
        """Small configuration for tests and quick runs."""
        merged = {"embedding_dim": 64, "hidden_units": 64}
        merged.update(overrides)
        return cls(**merged).validate()

    def to_json(self):
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text):
        return cls(**json.loads(text)).validate()

    @property
    def num_heads(self):
        return 3 if self.prediction_mode == THREE_HEAD else 1

    @property
    def candidate_tanh(self):
        return self.candidate_nonlinearity == "tanh"


@dataclass
class LstmLayerParams:
    """Four gates; U maps the layer input, W the recurrent state."""

    Uf: np.ndarray
    Wf: np.ndarray
    bf: np.ndarray
    Ug: np.ndarray
    Wg: np.ndarray
    bg: np.ndarray
    Uc: np.ndarray
    Wc: np.ndarray
    bc: np.ndarray
    Uo: np.ndarray
    Wo: np.ndarray
    bo: np.ndarray

    GATES = ("f", "g", "c", "o")

    @classmethod
    def create(cls, rng, in_dim, hidden):
        def mat(rows, cols):
            return rng.uniform(-_INIT_SCALE, _INIT_SCALE, size=(rows, cols))

        fields = {}
        for gate in cls.GATES:
            fields[f"U{gate}"] = mat(hidden, in_dim)
            fields[f"W{gate}"] = mat(hidden, hidden)
            fields[f"b{gate}"] = np.zeros(hidden)
        return cls(**fields)

    @classmethod
    def zeros(cls, in_dim, hidden):
        fields = {}
        for gate in cls.GATES:
            fields[f"U{gate}"] = np.zeros((hidden, in_dim))
            fields[f"W{gate}"] = np.zeros((hidden, hidden))
            fields[f"b{gate}"] = np.zeros(hidden)
        return cls(**fields)

    def named(self, prefix):
        for gate in self.GATES:
            yield f"{prefix}.U{gate}", getattr(self, f"U{gate}")
            yield f"{prefix}.W{gate}", getattr(self, f"W{gate}")
            yield f"{prefix}.b{gate}", getattr(self, f"b{gate}")


@dataclass
class SoftmaxHead:
    M: np.ndarray  # (vocab, hidden)
    b: np.ndarray  # (vocab,)

    @classmethod
    def create(cls, rng, vocab, hidden):
        return cls(
            M=rng.uniform(-_INIT_SCALE, _INIT_SCALE, size=(vocab, hidden)),
            b=np.zeros(vocab),
        )


@dataclass
class LstmState:
    h: np.ndarray
    s: np.ndarray


@dataclass
class Prediction:
    y_hat: np.ndarray
    argmax_index: int
    composite: int


@dataclass
class DeclPrediction:
    decl_code: int
    typedecl_code: int
    identifiertype_code: int
    unseen: bool = False


class DeclarationModel:
    def __init__(self, config, vocab, rng=None):
        config.validate()
        if vocab.size < 1:
            raise ValueError("cannot build a model over an empty vocabulary")
        self.config = config
        self.vocab = vocab
        # one generator covers init, shuffles and dropout when the trainer
        # passes its own; reproducibility depends on that single stream
        if rng is None:
            rng = np.random.default_rng(config.rng_seed)
        K, H, V = config.embedding_dim, config.hidden_units, vocab.size
        self.A = rng.uniform(-_INIT_SCALE, _INIT_SCALE, size=(K, V))
        self.layers = [
            LstmLayerParams.create(rng, K if i == 0 else H, H)
            for i in range(config.num_lstm_layers)
        ]
        self.heads = [SoftmaxHead.create(rng, V, H) for _ in range(config.num_heads)]

    def named_params(self):
        yield "embedding", self.A
        for i, layer in enumerate(self.layers):
            yield from layer.named(f"lstm{i}")
        for j, head in enumerate(self.heads):
            yield f"head{j}.M", head.M
            yield f"head{j}.b", head.b

    def param_dict(self):
        return dict(self.named_params())

    # -- forward -----------------------------------------------------------

    def indices_for(self, codes):
        out = []
        for code in codes:
            if code not in self.vocab.entries:
                raise UnknownToken(code)
            out.append(self.vocab.index_of(code))
        return np.asarray(out, dtype=np.int64)

    def run_batch(self, idx, train=False, rng=None, dropout_masks=None):
        """Batched forward pass.

        idx: (batch, time) dense indices; idx entries of -1 mean "no token",
        embedding a zero vector (used for unseen identifiers).  Returns
        (logits per head, cache) where the cache holds everything the
        backward pass replays.  dropout_masks, when given, replaces the rng
        draw, which lets a finite-difference oracle replay the exact pass.
        """
        cfg = self.config
        B, T = idx.shape
        H = cfg.hidden_units
        dropout = cfg.dropout if train else 0.0
        keep = 1.0 - dropout
        cache = {
            "idx": idx, "x": [], "layers": [], "masks": [], "h_top": None,
            "train": train,
        }
        for _ in range(cfg.num_lstm_layers):
            cache["layers"].append([])
            cache["masks"].append([])
        h = [np.zeros((B, H)) for _ in range(cfg.num_lstm_layers)]
        s = [np.zeros((B, H)) for _ in range(cfg.num_lstm_layers)]
        out = None
        for t in range(T):
            cols = idx[:, t]
            x = np.where(cols[:, None] >= 0, self.A[:, cols].T, 0.0)
            cache["x"].append(x)
            inp = x
            for li, layer in enumerate(self.layers):
                h_prev, s_prev = h[li], s[li]
                zf = inp @ layer.Uf.T + h_prev @ layer.Wf.T + layer.bf
                zg = inp @ layer.Ug.T + h_prev @ layer.Wg.T + layer.bg
                zc = inp @ layer.Uc.T + h_prev @ layer.Wc.T + layer.bc
                zo = inp @ layer.Uo.T + h_prev @ layer.Wo.T + layer.bo
                f, g, c, q, s_new, h_new = kernels.lstm_gates_forward(
                    zf, zg, zc, zo, s_prev, cfg.candidate_tanh
                )
                cache["layers"][li].append(
                    {"inp": inp, "h_prev": h_prev, "s_prev": s_prev,
                     "f": f, "g": g, "c": c, "q": q, "s": s_new, "h": h_new}
                )
                if dropout > 0.0:
                    if dropout_masks is not None:
                        mask = dropout_masks[li][t]
                    else:
                        mask = (rng.random((B, H)) < keep).astype(np.float64) / keep
                else:
                    mask = None
                cache["masks"][li].append(mask)
                out = h_new if mask is None else h_new * mask
                h[li], s[li] = h_new, s_new
                inp = out
        cache["h_top"] = out
        logits = [out @ head.M.T + head.b for head in self.heads]
        return logits, cache


def embed(A, token_vec):
    """Embedding lookup as a plain matrix-vector product."""
    A = np.asarray(A, dtype=np.float64)
    token_vec = np.asarray(token_vec, dtype=np.float64)
    if A.ndim != 2 or token_vec.ndim != 1 or A.shape[1] != token_vec.shape[0]:
        raise DimError(
            f"embed: A is {A.shape}, token vector is {token_vec.shape}"
        )
    return A @ token_vec


def lstm_step(params, state, x, candidate_tanh=False):
    """One cell step for a single example; -> new LstmState."""
    x = np.asarray(x, dtype=np.float64)
    hidden = params.bf.shape[0]
    if x.ndim != 1 or params.Uf.shape[1] != x.shape[0]:
        raise DimError(f"lstm_step: input of {x.shape} does not fit U {params.Uf.shape}")
    if state.h.shape != (hidden,) or state.s.shape != (hidden,):
        raise DimError("lstm_step: state does not match the layer width")
    zf = (params.Uf @ x + params.Wf @ state.h + params.bf)[None, :]
    zg = (params.Ug @ x + params.Wg @ state.h + params.bg)[None, :]
    zc = (params.Uc @ x + params.Wc @ state.h + params.bc)[None, :]
    zo = (params.Uo @ x + params.Wo @ state.h + params.bo)[None, :]
    _, _, _, _, s, h = kernels.lstm_gates_forward(
        zf, zg, zc, zo, state.s[None, :], candidate_tanh
    )
    return LstmState(h=h[0], s=s[0])


def forward(model, codes):
    """Composite code sequence -> one Prediction per head (no dropout)."""
    codes = list(codes)
    if len(codes) != model.config.seq_len:
        raise DimError(
            f"forward: expected {model.config.seq_len} tokens, got {len(codes)}"
        )
    idx = model.indices_for(codes)[None, :]
    logits, _ = model.run_batch(idx, train=False)
    out = []
    for logit in logits:
        probs = kernels.softmax_rows(logit)[0]
        top = int(np.argmax(probs))
        out.append(Prediction(y_hat=probs, argmax_index=top, composite=model.vocab.code_at(top)))
    return out


def _forward_index(model, index):
    idx = np.asarray([[index]], dtype=np.int64)
    logits, _ = model.run_batch(idx, train=False)
    return [int(np.argmax(kernels.softmax_rows(l)[0])) for l in logits]


def predict_declaration(model, vocab, id_code):
    """ID composite -> predicted (Decl, TypeDecl, IdentifierType) codes.

    id_code may be None (identifier never seen by the terminal coder) or a
    composite absent from the vocabulary; either way the model embeds a
    zero vector and still answers with its nearest learned declaration,
    flagging the result unseen.
    """
    unseen = id_code is None or id_code not in vocab.entries
    index = -1 if unseen else vocab.index_of(id_code)
    if model.config.prediction_mode == THREE_HEAD:
        tops = _forward_index(model, index)
        codes = [vocab.code_at(t) for t in tops]
        return DeclPrediction(codes[0], codes[1], codes[2], unseen=unseen)
    # single-head mode: feed each prediction back as the next input
    codes = []
    current = index
    for _ in range(3):
        top = _forward_index(model, current)[0]
        codes.append(vocab.code_at(top))
        current = top
    return DeclPrediction(codes[0], codes[1], codes[2], unseen=unseen)
