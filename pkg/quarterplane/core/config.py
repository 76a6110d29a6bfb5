"""
Quarterplane Configuration Management
"""

import os
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict, Optional

import structlog
import yaml

log = structlog.get_logger(__name__)

CROSSING_RULES = ("read", "written")


@dataclass
class DevelopmentConfig:
    """Diagonal development settings"""

    dense_table_limit: int = 2048
    scan_bound: int = 200


@dataclass
class VerificationConfig:
    """Simulation verification settings"""

    uw_steps: int = 25
    suw_steps: int = 40
    suw_diagonals: int = 400
    crossing_rule: str = "read"
    max_steps: int = 10000


@dataclass
class SymcodeConfig:
    """Symmetric code checking settings"""

    exhaustive_limit: int = 2_000_000


@dataclass
class FieldPolyConfig:
    """Prime field interpolation settings"""

    max_modulus: int = 257


@dataclass
class LoggingConfig:
    """Structured logging settings"""

    level: str = "WARNING"
    json: bool = False


class QuarterplaneConfig:
    """Main quarterplane configuration manager"""

    CONFIG_NAMES = [
        "quarterplane.yaml",
        "quarterplane.yml",
        ".quarterplane.yaml",
        ".quarterplane.yml",
    ]

    def __init__(self, config_path: Optional[str] = None):
        self.config_path = config_path or self._find_config_file()
        self.development = DevelopmentConfig()
        self.verification = VerificationConfig()
        self.symcode = SymcodeConfig()
        self.fieldpoly = FieldPolyConfig()
        self.logging = LoggingConfig()

        if self.config_path and os.path.exists(self.config_path):
            self.load_config()

    def _find_config_file(self) -> Optional[str]:
        """Find the configuration file in the current directory or parents"""
        current_dir = Path.cwd()

        for parent in [current_dir] + list(current_dir.parents):
            for config_name in self.CONFIG_NAMES:
                config_path = parent / config_name
                if config_path.exists():
                    return str(config_path)

        return None

    @staticmethod
    def _merge(section: Any, data: Any) -> Any:
        """Overlay known keys of ``data`` onto a section dataclass"""
        if not isinstance(data, dict):
            return section
        known = {f.name for f in fields(section)}
        updates = {key: value for key, value in data.items() if key in known}
        return replace(section, **updates)

    def load_config(self):
        """Load configuration from YAML file"""
        try:
            with open(self.config_path, "r", encoding="utf-8") as f:
                config_data = yaml.safe_load(f) or {}

            if not isinstance(config_data, dict):
                raise ValueError("top level must be a mapping")

            self.development = self._merge(self.development, config_data.get("development"))
            self.verification = self._merge(self.verification, config_data.get("verification"))
            self.symcode = self._merge(self.symcode, config_data.get("symcode"))
            self.fieldpoly = self._merge(self.fieldpoly, config_data.get("fieldpoly"))
            self.logging = self._merge(self.logging, config_data.get("logging"))

            if self.verification.crossing_rule not in CROSSING_RULES:
                log.warning(
                    "unknown_crossing_rule",
                    value=self.verification.crossing_rule,
                    path=self.config_path,
                )
                self.verification.crossing_rule = VerificationConfig.crossing_rule

        except Exception as e:
            log.warning("config_load_failed", path=self.config_path, error=str(e))

    def to_dict(self) -> Dict[str, Dict[str, Any]]:
        """Current configuration as plain data"""
        return {
            "development": asdict(self.development),
            "verification": asdict(self.verification),
            "symcode": asdict(self.symcode),
            "fieldpoly": asdict(self.fieldpoly),
            "logging": asdict(self.logging),
        }

    def save_config(self, config_path: Optional[str] = None) -> str:
        """Save current configuration to YAML file"""
        save_path = config_path or self.config_path or self.CONFIG_NAMES[0]

        with open(save_path, "w", encoding="utf-8") as f:
            yaml.dump(self.to_dict(), f, default_flow_style=False, indent=2, sort_keys=False)

        log.info("config_saved", path=save_path)
        return save_path
