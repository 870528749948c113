"""Text encoders producing one embedding row per label line.

Two families:

- ``hash<dim>`` (e.g. ``hash256``): deterministic signed feature hashing of
  character n-grams. No downloads, no randomness, identical text always maps
  to the identical row; cosine similarity reflects surface overlap. Useful
  offline and as a reproducible baseline.
- foundation-model text towers via transformers: ``clip`` (vision-language
  text encoder), ``bert`` (masked LM, mean pooling), ``gpt2`` (autoregressive
  LM, last-token pooling), or ``hf:<model-id>`` for any checkpoint (mean
  pooling). These need torch + transformers and a resolvable checkpoint;
  otherwise EncoderLoadFailure.

Every encoder reports the identifier and version recorded in the sidecar, and
its truncation policy (the tokenizer default for model-backed encoders).
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass

import numpy as np

from .errors import EncoderLoadFailure

_HF_CHECKPOINTS = {
    "clip": "openai/clip-vit-base-patch32",
    "bert": "bert-base-uncased",
    "gpt2": "gpt2",
}

DEFAULT_ENCODERS = ("clip", "bert", "gpt2")


@dataclass(frozen=True)
class EncoderInfo:
    name: str
    identifier: str
    version: str
    dim: int
    truncation: str


class HashedNgramEncoder:
    """Signed hashing of character 3..5-grams into a fixed-width vector."""

    _NGRAM_SIZES = (3, 4, 5)

    def __init__(self, name: str, dim: int):
        if dim < 2:
            raise EncoderLoadFailure(f"{name}: dimension must be >= 2")
        self.name = name
        self.dim = dim

    @property
    def info(self) -> EncoderInfo:
        return EncoderInfo(
            name=self.name,
            identifier=f"hashed-char-ngram-{min(self._NGRAM_SIZES)}to{max(self._NGRAM_SIZES)}",
            version="1",
            dim=self.dim,
            truncation="none",
        )

    def _row(self, text: str) -> np.ndarray:
        normalized = re.sub(r"\s+", " ", text.strip().lower())
        padded = f" {normalized} "
        row = np.zeros(self.dim)
        for size in self._NGRAM_SIZES:
            for start in range(max(len(padded) - size + 1, 0)):
                gram = padded[start:start + size]
                digest = hashlib.blake2b(gram.encode("utf-8"), digest_size=8).digest()
                value = int.from_bytes(digest, "little")
                index = value % self.dim
                sign = 1.0 if (value >> 63) & 1 else -1.0
                row[index] += sign
        if not row.any():
            # degenerate text (e.g. one character); anchor on a constant token
            row[0] = 1.0
        return row

    def encode(self, texts: list[str], batch_size: int) -> np.ndarray:
        del batch_size  # hashing has no batching constraint
        return np.stack([self._row(t) for t in texts])


class TransformersTextEncoder:
    """Text tower of a transformers checkpoint; pooling depends on the family."""

    def __init__(self, name: str, checkpoint: str, pooling: str):
        self.name = name
        self.checkpoint = checkpoint
        self.pooling = pooling
        try:
            import torch  # noqa: F401
            import transformers
        except ImportError as exc:
            raise EncoderLoadFailure(
                f"{name}: transformers/torch not installed ({exc})"
            ) from exc
        self._transformers = transformers
        try:
            if pooling == "clip":
                self._tokenizer = transformers.AutoTokenizer.from_pretrained(checkpoint)
                self._model = transformers.CLIPTextModel.from_pretrained(checkpoint)
            else:
                self._tokenizer = transformers.AutoTokenizer.from_pretrained(checkpoint)
                self._model = transformers.AutoModel.from_pretrained(checkpoint)
        except Exception as exc:
            raise EncoderLoadFailure(f"{name}: cannot load {checkpoint!r}: {exc}") from exc
        if self._tokenizer.pad_token is None:
            self._tokenizer.pad_token = self._tokenizer.eos_token
        self._model.eval()
        self.dim = int(self._model.config.hidden_size)

    @property
    def info(self) -> EncoderInfo:
        return EncoderInfo(
            name=self.name,
            identifier=self.checkpoint,
            version=self._transformers.__version__,
            dim=self.dim,
            truncation=f"tokenizer default (max_length={self._tokenizer.model_max_length})",
        )

    def encode(self, texts: list[str], batch_size: int) -> np.ndarray:
        import torch

        rows = []
        with torch.no_grad():
            for start in range(0, len(texts), batch_size):
                batch = texts[start:start + batch_size]
                tokens = self._tokenizer(
                    batch, return_tensors="pt", padding=True, truncation=True
                )
                output = self._model(**tokens)
                if self.pooling == "clip":
                    pooled = output.pooler_output
                elif self.pooling == "last":
                    mask = tokens["attention_mask"]
                    last = mask.sum(dim=1) - 1
                    pooled = output.last_hidden_state[
                        torch.arange(len(batch)), last
                    ]
                else:  # mean pooling over non-padding tokens
                    mask = tokens["attention_mask"].unsqueeze(-1)
                    summed = (output.last_hidden_state * mask).sum(dim=1)
                    pooled = summed / mask.sum(dim=1).clamp(min=1)
                rows.append(pooled.double().cpu().numpy())
        return np.concatenate(rows, axis=0)


def resolve_encoder(name: str):
    """Map an encoder name to a ready encoder instance."""
    match = re.fullmatch(r"hash(\d+)", name)
    if match:
        return HashedNgramEncoder(name, int(match.group(1)))
    if name in _HF_CHECKPOINTS:
        pooling = {"clip": "clip", "bert": "mean", "gpt2": "last"}[name]
        return TransformersTextEncoder(name, _HF_CHECKPOINTS[name], pooling)
    if name.startswith("hf:"):
        checkpoint = name[3:]
        if not checkpoint:
            raise EncoderLoadFailure("hf: prefix needs a checkpoint id")
        return TransformersTextEncoder(name, checkpoint, "mean")
    raise EncoderLoadFailure(
        f"unknown encoder {name!r}; use hash<dim>, one of {sorted(_HF_CHECKPOINTS)}, or hf:<id>"
    )
