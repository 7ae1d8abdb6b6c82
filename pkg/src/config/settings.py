"""
Application configuration constants.

Desk-scale defaults live here; larger encoders are configured through
RunConfig.
"""


# =============================================================================
# FRAMING
# =============================================================================

CROSS_MAX_LEN = 64
QUERY_MAX_LEN = 8  # M_q
DOC_MAX_LEN = 64  # M_d
GAZE_PAD_LENGTH = 10

# =============================================================================
# RANKER ENCODER (desk scale)
# =============================================================================

ENCODER_LAYERS = 2
ENCODER_HEADS = 2
ENCODER_D_MODEL = 64
ENCODER_D_FF = 128
ENCODER_ATTN_DROPOUT = 0.0
BI_ENCODER_D_OUT = 32


# =============================================================================
# GAZE PREDICTOR
# =============================================================================

GAZE_EMBED_DIM = 16
GAZE_LSTM_HIDDEN = 8  # per direction
GAZE_LAYERS = 1
GAZE_HEADS = 2
GAZE_D_FF = 16
GAZE_UNKNOWN_INIT = 0.05  # uniform bound for vectors missing from the word-vector table

GAZE_EPOCHS = 10
GAZE_LEARNING_RATE = 1e-2
GAZE_BATCH_SIZE = 16
GAZE_FOLDS = 10

# =============================================================================
# RANKER TRAINING
# =============================================================================

RANKER_LEARNING_RATE = 1e-3
RANKER_ADAM_EPS = 1e-6
RANKER_EPOCHS = 2
RANKER_BATCH_SIZE = 8
RANKER_GRAD_CLIP = 1.0
SCORE_CLAMP = 1e-7
MASK_GAZE_WEIGHT = 1.0  # neutral weight for [MASK] query augmentation tokens

# =============================================================================
# EVALUATION
# =============================================================================

METRIC_CUTOFF = 10
RELEVANT_GRADE = 2  # grades >= this binarize to relevant
RUN_SCORE_DECIMALS = 6


# =============================================================================
# SYNTHETIC CORPUS
# =============================================================================

SYNTHETIC_DOCS = 200
SYNTHETIC_QUERIES = 50
SYNTHETIC_CANDIDATES = 20
SYNTHETIC_TRIPLES = 2000
SYNTHETIC_GAZE_SENTENCES = 2000
