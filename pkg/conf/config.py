"""Configuration constants for the quasi-abelian homology engine."""

TOOL_VERSION = "0.1.0"

# Resource settings
DEFAULT_RESOURCE_CAP = 100_000  # max |G|^(n+1) * dim M for a bar resolution
MAX_GROUP_ORDER = 12
DEFAULT_MAX_DEGREE = 3

# General project settings
DEFAULT_FORMAT = "json"
DEFAULT_LOG_LEVEL = "INFO"
LOG_DIR = "logs"
LOG_FILE_NAME = "homology_engine.log"
LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"
REPORT_DIR = "res/reports"

# Environment overrides (flags win over these, these win over the defaults above)
ENV_FORMAT = "QAH_FORMAT"
ENV_MAX_DEGREE = "QAH_MAX_DEGREE"
ENV_RESOURCE_CAP = "QAH_RESOURCE_CAP"
ENV_LOG_LEVEL = "QAH_LOG_LEVEL"

# Law suites
LAW_TOP_DEGREE = 3  # group suites check degrees 0..LAW_TOP_DEGREE
LAW_MODULE_DIM = 3  # largest random coefficient module
WITNESS_DIR = "res/witnesses"
WITNESS_SHRINK_ATTEMPTS = 200  # candidate edits tried while shrinking a failing case
