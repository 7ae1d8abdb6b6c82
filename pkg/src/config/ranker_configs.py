"""
Registry of ranker variants: model class path, scoring mode and kwargs per variant.
"""

CROSS_ENCODER_CLASS = "ranker.cross_encoder.CrossEncoderModel"
BI_ENCODER_CLASS = "ranker.bi_encoder.BiEncoderModel"


def get_ranker_configs() -> list[dict]:
    """Get the list of ranker variant configurations."""
    return [
        {
            "name": "monobert",  # cross-encoder without gaze
            "ranker": "cross",
            "mode": "baseline",
            "enabled": True,
            "model_class": CROSS_ENCODER_CLASS,
            "model_kwargs": {},
        },
        {
            "name": "gazby-c-last",
            "ranker": "cross",
            "mode": "last_layer",
            "enabled": True,
            "model_class": CROSS_ENCODER_CLASS,
            "model_kwargs": {},
        },
        {
            "name": "gazby-c-all",
            "ranker": "cross",
            "mode": "all_layers",
            "enabled": True,
            "model_class": CROSS_ENCODER_CLASS,
            "model_kwargs": {},
        },
        {
            "name": "gazby-c-first",
            "ranker": "cross",
            "mode": "first_layer",
            "enabled": True,
            "model_class": CROSS_ENCODER_CLASS,
            "model_kwargs": {},
        },
        {
            "name": "colbert",  # bi-encoder without gaze
            "ranker": "bi",
            "mode": "baseline",
            "enabled": True,
            "model_class": BI_ENCODER_CLASS,
            "model_kwargs": {},
        },
        {
            "name": "colbert-tfidf",
            "ranker": "bi",
            "mode": "tfidf",
            "enabled": True,
            "model_class": BI_ENCODER_CLASS,
            "model_kwargs": {},
        },
        {
            "name": "gazby-b-maxsim",
            "ranker": "bi",
            "mode": "maxsim",
            "enabled": True,
            "model_class": BI_ENCODER_CLASS,
            "model_kwargs": {},
        },
        {
            "name": "gazby-b-last",
            "ranker": "bi",
            "mode": "last_layer",
            "enabled": True,
            "model_class": BI_ENCODER_CLASS,
            "model_kwargs": {},
        },
        {
            "name": "gazby-b-combined",
            "ranker": "bi",
            "mode": "combined",
            "enabled": True,
            "model_class": BI_ENCODER_CLASS,
            "model_kwargs": {},
        },
    ]


def variant_for(ranker: str, mode: str) -> dict:
    """The enabled variant of a ranker kind scoring in the given mode."""
    for config in get_ranker_configs():
        if config["ranker"] == ranker and config["mode"] == mode and config.get("enabled", True):
            return config
    raise KeyError(f"no {ranker} variant scores in mode {mode}")


def uses_gaze(mode: str) -> bool:
    return mode not in ("baseline", "tfidf")
