"""
Configuration validation and environment variable handling
"""

import logging
import os
from typing import Any, Dict, Optional
from dotenv import load_dotenv, find_dotenv

# Load environment variables
load_dotenv(find_dotenv(usecwd=True))

DOUBLE_PRECISION_BITS = 53

DEFAULTS = {
    "TORUS_PRECISION_BITS": "53",
    "TORUS_JOBS": "1",
    "TORUS_LOG_LEVEL": "WARNING",
}

class ConfigError(Exception):
    """Raised when configuration validation fails"""
    pass

def _int_env(name: str, minimum: int) -> int:
    """
    Read an integer environment variable with a lower bound.

    Args:
        name: Environment variable name
        minimum: Smallest accepted value

    Returns:
        Parsed integer (falls back to DEFAULTS when unset)

    Raises:
        ConfigError: If the value is not an integer or is below minimum
    """
    raw = os.environ.get(name) or DEFAULTS[name]
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"Invalid {name}: {raw!r}\nExpected an integer >= {minimum}.")
    if value < minimum:
        raise ConfigError(f"Invalid {name}: {value}\nExpected an integer >= {minimum}.")
    return value

def get_numeric_config() -> Dict[str, int]:
    """Get and validate precision and worker defaults"""
    return {
        "TORUS_PRECISION_BITS": _int_env("TORUS_PRECISION_BITS", DOUBLE_PRECISION_BITS),
        "TORUS_JOBS": _int_env("TORUS_JOBS", 1),
    }

def get_logging_config() -> Dict[str, Optional[str]]:
    """Get and validate logging configuration"""
    level = (os.environ.get("TORUS_LOG_LEVEL") or DEFAULTS["TORUS_LOG_LEVEL"]).upper()
    if not isinstance(logging.getLevelName(level), int):
        raise ConfigError(
            f"Invalid TORUS_LOG_LEVEL: {level}\n"
            f"Expected one of DEBUG, INFO, WARNING, ERROR, CRITICAL."
        )
    return {
        "TORUS_LOG_LEVEL": level,
        "TORUS_LOG_FILE": os.environ.get("TORUS_LOG_FILE"),
    }

def default_precision() -> int:
    """Default working precision in bits"""
    return get_numeric_config()["TORUS_PRECISION_BITS"]

def default_jobs() -> int:
    """Default worker count for parallel sums and scans"""
    return get_numeric_config()["TORUS_JOBS"]

def validate_all_config() -> Dict[str, Any]:
    """
    Validate all configuration and return a complete config dictionary.

    Returns:
        Complete configuration dictionary

    Raises:
        ConfigError: If configuration validation fails
    """
    try:
        return {
            "numeric": get_numeric_config(),
            "logging": get_logging_config(),
        }
    except ConfigError:
        raise
    except Exception as e:
        raise ConfigError(f"Configuration validation failed: {e}")

def print_config_summary(config: Dict[str, Any]) -> None:
    """Print a summary of the current configuration"""
    print("🔧 Configuration Summary")
    print("=" * 40)

    numeric = config["numeric"]
    print(f"Precision: {numeric['TORUS_PRECISION_BITS']} bits")
    print(f"Jobs: {numeric['TORUS_JOBS']}")

    logging_config = config["logging"]
    print(f"Log level: {logging_config['TORUS_LOG_LEVEL']}")
    print(f"Log file: {logging_config['TORUS_LOG_FILE'] or 'NOT SET'}")

    print("=" * 40)
