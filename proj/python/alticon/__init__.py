"""Context-aware alt-text generation for mobile UI icons.

The heavy lifting lives in the compiled ``_alticon`` extension; this
package re-exports its operations: layout parsing, icon detection and
context extraction, byte-preserving contentDescription injection, prompt
rendering, icon image preparation, and the caption metrics
(BLEU-1/2, ROUGE-L, METEOR-lite, CIDEr-D).
"""

from ._alticon import (
    AltIconError,
    __version__,
    bleu_n,
    build_prompt,
    canonical_context_json,
    cider,
    classifier_prompt,
    crop_png,
    detect_icons,
    evaluate,
    extract_context,
    inject_alt_text,
    load_rico_screen,
    mark_bbox_png,
    meteor_lite,
    parse_layout,
    rouge_l,
    standardize_png,
    tokenize,
)

__all__ = [
    "AltIconError",
    "__version__",
    "bleu_n",
    "build_prompt",
    "canonical_context_json",
    "cider",
    "classifier_prompt",
    "crop_png",
    "detect_icons",
    "evaluate",
    "extract_context",
    "inject_alt_text",
    "load_rico_screen",
    "mark_bbox_png",
    "meteor_lite",
    "parse_layout",
    "rouge_l",
    "standardize_png",
    "tokenize",
]
