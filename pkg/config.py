"""
Centralized configuration for the valuations-at-infinity toolkit.
All budgets, defaults and tunable limits are defined here.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Any, Optional
import logging
import os
import json


@dataclass
class ValuesConfig:
    """Configuration for continued fractions over the value groups."""
    cf_digit_budget: int = 64  # Quadratic expansions that never reach a surd tail

    def validate(self) -> None:
        """Validate values configuration."""
        if self.cf_digit_budget < 1:
            raise ValueError("cf_digit_budget must be a positive integer")


@dataclass
class DeltaConfig:
    """Configuration for delta-sequence constructions of types D and E."""
    type_d_required_witnesses: int = 2
    type_d_scale_limit: int = 400
    type_e_default_prefix: int = 6
    type_e_prefix_limit: int = 24

    def validate(self) -> None:
        """Validate delta configuration."""
        if self.type_d_required_witnesses < 2:
            raise ValueError("type_d_required_witnesses must be at least 2")
        if self.type_d_scale_limit < 2:
            raise ValueError("type_d_scale_limit must be at least 2")
        if self.type_e_default_prefix < 1:
            raise ValueError("type_e_default_prefix must be a positive integer")
        if self.type_e_prefix_limit < self.type_e_default_prefix:
            raise ValueError("type_e_prefix_limit must not be below type_e_default_prefix")


@dataclass
class SemigroupConfig:
    """Configuration for semigroup searches and enumeration."""
    search_budget: int = 200000  # Coefficient vectors explored by bounded searches
    brute_force_limit: int = 2000000
    enumerate_limit: int = 100000

    def validate(self) -> None:
        """Validate semigroup configuration."""
        if self.search_budget < 1 or self.brute_force_limit < 1 or self.enumerate_limit < 1:
            raise ValueError("Semigroup budgets must be positive integers")


@dataclass
class ProximityConfig:
    """Configuration for cluster reconstruction."""
    default_truncation: int = 32  # Points materialized for infinite tails

    def validate(self) -> None:
        """Validate proximity configuration."""
        if self.default_truncation < 0:
            raise ValueError("default_truncation must be non-negative")


@dataclass
class CurvesConfig:
    """Configuration for polynomial parsing and the approximate-root construction."""
    max_exponent: int = 1000
    default_t: str = "1"

    def validate(self) -> None:
        """Validate curves configuration."""
        if self.max_exponent < 1:
            raise ValueError("max_exponent must be a positive integer")
        try:
            t = Fraction(self.default_t)
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"default_t must be a rational literal, got '{self.default_t}'")
        if t == 0:
            raise ValueError("default_t must be nonzero")


@dataclass
class OracleConfig:
    """Configuration for the value/resultant corpus runner."""
    corpus_size: int = 70  # Random polynomials per core
    max_degree: int = 10
    max_terms: int = 4
    seed: int = 42
    cores: list = field(default_factory=lambda: [[5, 3], [6, 4, 11], [18, 12, 33, 4]])

    # Execution
    execution_mode: str = "parallel"  # "parallel" or "sequential"
    max_workers: int = 4

    def validate(self) -> None:
        """Validate oracle configuration."""
        if self.corpus_size < 1:
            raise ValueError("corpus_size must be a positive integer")
        if self.max_degree < 1 or self.max_terms < 1:
            raise ValueError("max_degree and max_terms must be positive integers")
        if self.execution_mode not in ["parallel", "sequential"]:
            raise ValueError("Execution mode must be 'parallel' or 'sequential'")
        if self.max_workers < 1:
            raise ValueError("max_workers must be at least 1")
        if not self.cores:
            raise ValueError("cores cannot be empty")


@dataclass
class LoggingConfig:
    """Configuration for logging."""
    log_level: str = "WARNING"  # DEBUG, INFO, WARNING, ERROR, CRITICAL
    log_format: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    log_to_file: bool = False
    log_file_path: str = "logs/valuations.log"

    def validate(self) -> None:
        """Validate Logging configuration."""
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if self.log_level.upper() not in valid_levels:
            raise ValueError(f"log_level must be one of {valid_levels}")


@dataclass
class ValuationSystemConfig:
    """
    Master configuration for the whole toolkit.
    Aggregates all sub-configurations.
    """
    values: ValuesConfig = field(default_factory=ValuesConfig)
    delta: DeltaConfig = field(default_factory=DeltaConfig)
    semigroup: SemigroupConfig = field(default_factory=SemigroupConfig)
    proximity: ProximityConfig = field(default_factory=ProximityConfig)
    curves: CurvesConfig = field(default_factory=CurvesConfig)
    oracle: OracleConfig = field(default_factory=OracleConfig)
    logging: LoggingConfig = field(default_factory=LoggingConfig)

    def validate(self) -> None:
        """Validate all sub-configurations."""
        self.values.validate()
        self.delta.validate()
        self.semigroup.validate()
        self.proximity.validate()
        self.curves.validate()
        self.oracle.validate()
        self.logging.validate()

    @classmethod
    def from_dict(cls, config_dict: Dict[str, Any]) -> "ValuationSystemConfig":
        """
        Create configuration from dictionary.

        Args:
            config_dict: Dictionary with configuration values

        Returns:
            ValuationSystemConfig instance
        """
        return cls(
            values=ValuesConfig(**config_dict.get("values", {})),
            delta=DeltaConfig(**config_dict.get("delta", {})),
            semigroup=SemigroupConfig(**config_dict.get("semigroup", {})),
            proximity=ProximityConfig(**config_dict.get("proximity", {})),
            curves=CurvesConfig(**config_dict.get("curves", {})),
            oracle=OracleConfig(**config_dict.get("oracle", {})),
            logging=LoggingConfig(**config_dict.get("logging", {}))
        )

    @classmethod
    def from_json_file(cls, file_path: str) -> "ValuationSystemConfig":
        """
        Load configuration from JSON file.

        Args:
            file_path: Path to JSON configuration file

        Returns:
            ValuationSystemConfig instance
        """
        with open(file_path, 'r') as f:
            config_dict = json.load(f)
        return cls.from_dict(config_dict)

    def to_dict(self) -> Dict[str, Any]:
        """
        Convert configuration to dictionary.

        Returns:
            Dictionary representation
        """
        return {
            "values": {
                "cf_digit_budget": self.values.cf_digit_budget
            },
            "delta": {
                "type_d_required_witnesses": self.delta.type_d_required_witnesses,
                "type_d_scale_limit": self.delta.type_d_scale_limit,
                "type_e_default_prefix": self.delta.type_e_default_prefix,
                "type_e_prefix_limit": self.delta.type_e_prefix_limit
            },
            "semigroup": {
                "search_budget": self.semigroup.search_budget,
                "brute_force_limit": self.semigroup.brute_force_limit,
                "enumerate_limit": self.semigroup.enumerate_limit
            },
            "proximity": {
                "default_truncation": self.proximity.default_truncation
            },
            "curves": {
                "max_exponent": self.curves.max_exponent,
                "default_t": self.curves.default_t
            },
            "oracle": {
                "corpus_size": self.oracle.corpus_size,
                "max_degree": self.oracle.max_degree,
                "max_terms": self.oracle.max_terms,
                "seed": self.oracle.seed,
                "cores": [list(core) for core in self.oracle.cores],
                "execution_mode": self.oracle.execution_mode,
                "max_workers": self.oracle.max_workers
            },
            "logging": {
                "log_level": self.logging.log_level,
                "log_format": self.logging.log_format,
                "log_to_file": self.logging.log_to_file,
                "log_file_path": self.logging.log_file_path
            }
        }

    def to_json_file(self, file_path: str) -> None:
        """
        Save configuration to JSON file.

        Args:
            file_path: Path to save JSON configuration
        """
        with open(file_path, 'w') as f:
            json.dump(self.to_dict(), f, indent=2)

    @classmethod
    def from_env(cls) -> "ValuationSystemConfig":
        """
        Create configuration from environment variables.
        Environment variables should be prefixed with VALUATIONS_

        Returns:
            ValuationSystemConfig instance
        """
        config = cls()

        if os.getenv("VALUATIONS_CF_DIGIT_BUDGET"):
            config.values.cf_digit_budget = int(os.getenv("VALUATIONS_CF_DIGIT_BUDGET"))
        if os.getenv("VALUATIONS_DEFAULT_TRUNCATION"):
            config.proximity.default_truncation = int(os.getenv("VALUATIONS_DEFAULT_TRUNCATION"))
        if os.getenv("VALUATIONS_SEARCH_BUDGET"):
            config.semigroup.search_budget = int(os.getenv("VALUATIONS_SEARCH_BUDGET"))

        # Oracle runner
        if os.getenv("VALUATIONS_ORACLE_MODE"):
            config.oracle.execution_mode = os.getenv("VALUATIONS_ORACLE_MODE")
        if os.getenv("VALUATIONS_ORACLE_WORKERS"):
            config.oracle.max_workers = int(os.getenv("VALUATIONS_ORACLE_WORKERS"))

        if os.getenv("VALUATIONS_LOG_LEVEL"):
            config.logging.log_level = os.getenv("VALUATIONS_LOG_LEVEL")

        return config


# Global default configuration instance
DEFAULT_CONFIG = ValuationSystemConfig()

# Validate default configuration on module load
DEFAULT_CONFIG.validate()


def get_config() -> ValuationSystemConfig:
    """
    Get the global configuration instance.
    Can be overridden by loading from file or environment.

    Returns:
        ValuationSystemConfig instance
    """
    return DEFAULT_CONFIG


def load_config(config_path: Optional[str] = None) -> ValuationSystemConfig:
    """
    Load configuration from file or environment.

    Args:
        config_path: Optional path to JSON config file

    Returns:
        ValuationSystemConfig instance
    """
    if config_path and os.path.exists(config_path):
        config = ValuationSystemConfig.from_json_file(config_path)
    else:
        # Try loading from environment
        config = ValuationSystemConfig.from_env()

    config.validate()
    return config


def setup_logging(logging_config: Optional[LoggingConfig] = None) -> None:
    """
    Configure the root logger from a LoggingConfig.

    Log records go to stderr so command output on stdout stays deterministic.

    Args:
        logging_config: Logging section, defaults to the global configuration
    """
    logging_config = logging_config or DEFAULT_CONFIG.logging
    logging_config.validate()

    handlers = [logging.StreamHandler()]
    if logging_config.log_to_file:
        directory = os.path.dirname(logging_config.log_file_path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        handlers.append(logging.FileHandler(logging_config.log_file_path))

    logging.basicConfig(
        level=getattr(logging, logging_config.log_level.upper()),
        format=logging_config.log_format,
        handlers=handlers,
        force=True
    )


def set_config(config: ValuationSystemConfig) -> None:
    """
    Replace the global configuration returned by get_config().

    Args:
        config: Validated configuration instance
    """
    global DEFAULT_CONFIG
    config.validate()
    DEFAULT_CONFIG = config
