from __future__ import annotations

from typing import Optional

from sts_numerics import StsError


class ConfigError(StsError, ValueError):
    def __init__(self, message: str, line: Optional[int] = None) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class DatasetError(StsError, ValueError):
    def __init__(self, message: str, row: Optional[int] = None) -> None:
        self.row = row
        super().__init__(f"row {row}: {message}" if row is not None else message)
