"""
Default seceki settings. Override these with settings in the module pointed to
by the SECEKI_SETTINGS_MODULE environment variable.
"""

DEBUG = False

# Directory that receives run artifacts when neither the config nor the CLI names one.
OUTPUT_DIR = "runs"

# Worker threads for the forward-model sweep (1 runs members serially).
THREADS = 1

# Relative diagonal jitter added once when C^gg + Gamma fails to factor.
JITTER_SCALE = 1e-10

# Significant digits written to metrics CSV files.
CSV_PRECISION = 17
