"""Experiment configuration tree.

A run is fully described by a ``RunConfig``: one dataclass section per
subsystem, loadable from a JSON file plus ``--set section.key=value``
overrides. Unknown keys are rejected. Two fingerprints are derived from
the resolved tree: ``fingerprint()`` covers everything (used to guard run
directories), ``model_fingerprint()`` covers only the sections that fix
the model architecture and feature space (used to validate checkpoints).
"""

import dataclasses
import hashlib
import json
from dataclasses import dataclass, field

from .errors import ConfigurationError


@dataclass
class CorpusSpec:
    """Parametric corpus description: sizes, feature space, seed."""

    num_speakers: int = 3
    num_styles: int = 3
    utterances_per_speaker: int = 100
    phonemes_min: int = 4
    phonemes_max: int = 8
    phoneme_inventory_size: int = 20
    mel_bins: int = 80
    frame_rate_hz: float = 80.0  # 12.5 ms hop at 16 kHz
    seed: int = 1234

    @property
    def phonemes_per_utterance_range(self):
        return (self.phonemes_min, self.phonemes_max)

    def validate(self):
        if self.num_speakers < 1:
            raise ConfigurationError("corpus.num_speakers must be >= 1")
        if self.num_styles != self.num_speakers:
            raise ConfigurationError(
                "corpus.num_styles must equal corpus.num_speakers "
                "(one distinctive style per speaker)")
        if self.utterances_per_speaker < 1:
            raise ConfigurationError("corpus.utterances_per_speaker must be >= 1")
        if self.phonemes_min < 2:
            raise ConfigurationError("corpus.phonemes_min must be >= 2")
        if self.phonemes_max < self.phonemes_min:
            raise ConfigurationError("corpus.phonemes_max must be >= corpus.phonemes_min")
        if self.phoneme_inventory_size < 1:
            raise ConfigurationError("corpus.phoneme_inventory_size must be >= 1")
        if self.mel_bins < 8:
            raise ConfigurationError("corpus.mel_bins must be >= 8")
        if self.frame_rate_hz <= 0:
            raise ConfigurationError("corpus.frame_rate_hz must be > 0")


@dataclass
class EncoderConfig:
    """Text encoder: pre-net + convolution-bank/highway/BiGRU body."""

    embed_dim: int = 128
    prenet_dims: tuple = (128, 64)
    prenet_dropout: float = 0.5
    cbhg_bank_size: int = 8
    cbhg_channels: int = 64
    highway_layers: int = 4
    output_dim: int = 128
    speaker_embed_dim: int = 256
    style_embed_dim: int = 64

    def validate(self):
        dims = tuple(self.prenet_dims)
        if len(dims) != 2:
            raise ConfigurationError("encoder.prenet_dims must have exactly two layers")
        for name in ("embed_dim", "cbhg_bank_size", "cbhg_channels", "highway_layers",
                     "output_dim", "speaker_embed_dim", "style_embed_dim"):
            if getattr(self, name) <= 0:
                raise ConfigurationError(f"encoder.{name} must be > 0")
        if any(d <= 0 for d in dims):
            raise ConfigurationError("encoder.prenet_dims entries must be > 0")
        if self.output_dim % 2 != 0:
            raise ConfigurationError("encoder.output_dim must be even (bidirectional halves)")


@dataclass
class PredictorConfig:
    """Phoneme-level prosody predictor (pitch, duration, energy)."""

    num_conv_layers: int = 5
    kernel_width: int = 5
    channels: int = 256
    dropout_rate: float = 0.2
    output_dim: int = 3

    def validate(self):
        if self.num_conv_layers != 5:
            raise ConfigurationError("predictor.num_conv_layers is fixed at 5")
        if self.output_dim != 3:
            raise ConfigurationError("predictor.output_dim is fixed at 3")
        if self.kernel_width < 1 or self.kernel_width % 2 == 0:
            raise ConfigurationError("predictor.kernel_width must be odd and >= 1")
        if self.channels <= 0:
            raise ConfigurationError("predictor.channels must be > 0")
        if self.channels % 2 != 0:
            raise ConfigurationError("predictor.channels must be even (positional encoding)")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ConfigurationError("predictor.dropout_rate must be in [0, 1)")


@dataclass
class ProsodyEncoderConfig:
    """Multi-scale prosody encoder (conv bank -> pool -> conv -> BLSTM)."""

    bank_max_width: int = 8
    bank_channels_per_width: int = 32
    post_conv_channels: int = 128
    blstm_hidden: int = 64

    @property
    def output_dim(self):
        return 2 * self.blstm_hidden

    def validate(self):
        if self.bank_max_width < 1:
            raise ConfigurationError("prosody_encoder.bank_max_width must be >= 1")
        for name in ("bank_channels_per_width", "post_conv_channels", "blstm_hidden"):
            if getattr(self, name) <= 0:
                raise ConfigurationError(f"prosody_encoder.{name} must be > 0")


@dataclass
class DecoderConfig:
    """Autoregressive mel decoder with mixture-of-Gaussians attention."""

    attention_mixtures: int = 5
    attention_sigma_floor: float = 0.1
    decoder_rnn_dims: tuple = (256, 256)
    prenet_dims: tuple = (128, 64)
    prenet_dropout: float = 0.5
    reduction_factor: int = 1
    max_decoder_steps: int = 2000
    stop_threshold: float = 0.5
    stop_pos_weight: float = 5.0
    postnet_layers: int = 5
    postnet_channels: int = 256
    postnet_kernel: int = 5

    def validate(self):
        if self.attention_mixtures < 1:
            raise ConfigurationError("decoder.attention_mixtures must be >= 1")
        if self.reduction_factor < 1:
            raise ConfigurationError("decoder.reduction_factor must be >= 1")
        if self.postnet_layers != 5:
            raise ConfigurationError("decoder.postnet_layers is fixed at 5")
        if len(tuple(self.decoder_rnn_dims)) != 2:
            raise ConfigurationError("decoder.decoder_rnn_dims must have exactly two layers")
        if len(tuple(self.prenet_dims)) != 2:
            raise ConfigurationError("decoder.prenet_dims must have exactly two layers")
        if self.max_decoder_steps < 1:
            raise ConfigurationError("decoder.max_decoder_steps must be >= 1")
        if not 0.0 < self.stop_threshold < 1.0:
            raise ConfigurationError("decoder.stop_threshold must be in (0, 1)")
        if self.attention_sigma_floor <= 0:
            raise ConfigurationError("decoder.attention_sigma_floor must be > 0")
        if self.postnet_kernel < 1 or self.postnet_kernel % 2 == 0:
            raise ConfigurationError("decoder.postnet_kernel must be odd and >= 1")


@dataclass
class TrainConfig:
    """Optimizer schedule, batching, checkpoint cadence."""

    batch_size: int = 16
    learning_rate: float = 1e-3
    final_learning_rate: float = 1e-4
    grad_clip: float = 1.0
    max_steps: int = 10000
    checkpoint_every: int = 1000
    seed: int = 0
    prosody_loss_weight: float = 1.0
    # Ablation switch: which prosody columns (pitch, duration, energy) stay
    # live end to end. Dropped columns are zero-masked in predictor targets
    # and prosody-encoder inputs.
    prosody_mask: tuple = (True, True, True)

    def validate(self):
        if self.learning_rate <= 0 or self.final_learning_rate <= 0:
            raise ConfigurationError("train.learning_rate values must be > 0")
        if self.grad_clip <= 0:
            raise ConfigurationError("train.grad_clip must be > 0")
        if self.batch_size < 1:
            raise ConfigurationError("train.batch_size must be >= 1")
        if self.max_steps < 1:
            raise ConfigurationError("train.max_steps must be >= 1")
        if self.checkpoint_every < 1:
            raise ConfigurationError("train.checkpoint_every must be >= 1")
        if len(tuple(self.prosody_mask)) != 3:
            raise ConfigurationError("train.prosody_mask must have three entries")


@dataclass
class EvalConfig:
    """Objective evaluation: cross combinations, ablation, control sweeps."""

    num_texts: int = 10
    pitch_scales: tuple = (0.8, 1.0, 1.2)
    energy_scales: tuple = (0.8, 1.0, 1.2)
    duration_scales: tuple = (0.8, 1.0, 1.2)
    control_speaker: int = 0
    control_style: int = 0
    seed: int = 99

    def validate(self):
        if self.num_texts < 1:
            raise ConfigurationError("eval.num_texts must be >= 1")
        for name in ("pitch_scales", "energy_scales", "duration_scales"):
            if any(s <= 0 for s in getattr(self, name)):
                raise ConfigurationError(f"eval.{name} entries must be > 0")


# Sections whose resolved values define the model architecture / feature
# space; checkpoints embed and enforce this subset.
_MODEL_SECTIONS = ("corpus", "encoder", "predictor", "prosody_encoder", "decoder")


@dataclass
class RunConfig:
    corpus: CorpusSpec = field(default_factory=CorpusSpec)
    encoder: EncoderConfig = field(default_factory=EncoderConfig)
    predictor: PredictorConfig = field(default_factory=PredictorConfig)
    prosody_encoder: ProsodyEncoderConfig = field(default_factory=ProsodyEncoderConfig)
    decoder: DecoderConfig = field(default_factory=DecoderConfig)
    train: TrainConfig = field(default_factory=TrainConfig)
    eval: EvalConfig = field(default_factory=EvalConfig)
    seed: int = 0

    def validate(self):
        for name in _MODEL_SECTIONS + ("train", "eval"):
            getattr(self, name).validate()

    def to_dict(self):
        return _canonical(dataclasses.asdict(self))

    def fingerprint(self):
        return _hash_dict(self.to_dict())

    def model_fingerprint(self):
        d = self.to_dict()
        return _hash_dict({k: d[k] for k in _MODEL_SECTIONS})

    @classmethod
    def from_dict(cls, data):
        return _from_dict(cls, data, path="")

    @classmethod
    def from_file(cls, path):
        with open(path, "r", encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigurationError(f"config file {path} is not valid JSON: {exc}") from exc
        return cls.from_dict(data)

    def apply_overrides(self, overrides):
        """Apply ``section.key=value`` strings; returns self."""
        for item in overrides:
            if "=" not in item:
                raise ConfigurationError(f"override '{item}' is not of the form section.key=value")
            key, raw = item.split("=", 1)
            parts = key.strip().split(".")
            if len(parts) == 1 and parts[0] == "seed":
                self.seed = _coerce(raw, int, "seed")
                continue
            if len(parts) != 2:
                raise ConfigurationError(f"override key '{key}' must be section.key or 'seed'")
            section, fieldname = parts
            if not hasattr(self, section) or section == "seed":
                raise ConfigurationError(f"unknown config section '{section}'")
            target = getattr(self, section)
            fields = {f.name: f for f in dataclasses.fields(target)}
            if fieldname not in fields:
                raise ConfigurationError(f"unknown config key '{section}.{fieldname}'")
            current = getattr(target, fieldname)
            setattr(target, fieldname, _coerce_like(raw, current, f"{section}.{fieldname}"))
        return self


def _coerce(raw, typ, keyname):
    try:
        if typ is bool:
            low = raw.strip().lower()
            if low in ("true", "1", "yes"):
                return True
            if low in ("false", "0", "no"):
                return False
            raise ValueError(raw)
        return typ(raw)
    except ValueError as exc:
        raise ConfigurationError(f"cannot parse '{raw}' for {keyname}") from exc


def _coerce_like(raw, current, keyname):
    if isinstance(current, bool):
        return _coerce(raw, bool, keyname)
    if isinstance(current, int):
        return _coerce(raw, int, keyname)
    if isinstance(current, float):
        return _coerce(raw, float, keyname)
    if isinstance(current, (tuple, list)):
        try:
            value = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"cannot parse '{raw}' for {keyname} (expected JSON list)") from exc
        if not isinstance(value, list):
            raise ConfigurationError(f"{keyname} expects a JSON list, got '{raw}'")
        return tuple(value)
    return raw


def _from_dict(cls, data, path):
    if not isinstance(data, dict):
        raise ConfigurationError(f"config section '{path or '<root>'}' must be a mapping")
    fields = {f.name: f for f in dataclasses.fields(cls)}
    kwargs = {}
    for key, value in data.items():
        if key not in fields:
            where = f"{path}.{key}" if path else key
            raise ConfigurationError(f"unknown config key '{where}'")
        f = fields[key]
        if dataclasses.is_dataclass(f.type) or (isinstance(f.default_factory, type)
                                                and dataclasses.is_dataclass(f.default_factory)):
            kwargs[key] = _from_dict(f.default_factory, value, path=key)
        elif isinstance(value, list):
            kwargs[key] = tuple(value)
        else:
            kwargs[key] = value
    return cls(**kwargs)


def _canonical(obj):
    if isinstance(obj, dict):
        return {k: _canonical(v) for k, v in sorted(obj.items())}
    if isinstance(obj, (list, tuple)):
        return [_canonical(v) for v in obj]
    return obj


def _hash_dict(d):
    blob = json.dumps(d, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()
