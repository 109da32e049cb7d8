"""Neural declaration prediction: LSTM model, trainer, model file format."""

from . import kernels
from .model import (
    DeclarationModel,
    DeclPrediction,
    LstmLayerParams,
    LstmState,
    ModelConfig,
    Prediction,
    SoftmaxHead,
    embed,
    forward,
    lstm_step,
    predict_declaration,
)
from .modelfile import load as load_model
from .modelfile import save as save_model
from .training import TrainResult, train, training_key_recall

__all__ = [
    "DeclarationModel",
    "DeclPrediction",
    "LstmLayerParams",
    "LstmState",
    "ModelConfig",
    "Prediction",
    "SoftmaxHead",
    "TrainResult",
    "embed",
    "forward",
    "kernels",
    "load_model",
    "lstm_step",
    "predict_declaration",
    "save_model",
    "train",
    "training_key_recall",
]
