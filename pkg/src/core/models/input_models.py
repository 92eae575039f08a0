"""
入力ファイルモデル（pydantic）

spectrum コマンドの InputSpec と nambu コマンドのシステムファイルを検証する。
"""

from typing import Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from core.models.physics_models import HamiltonianBranch


class EntryError(ValueError):
    """ルート検証で検出した、特定フィールドに帰属するエラー"""

    def __init__(self, field: str, message: str):
        super().__init__(message)
        self.field = field


class HamiltonianEntry(BaseModel):
    """ハミルトニアン 1 個分: ポテンシャルかペアテーブルのどちらか一方"""
    model_config = ConfigDict(extra="forbid")

    potential: Optional[List[float]] = None
    pair_table: Optional[List[List[float]]] = None

    @model_validator(mode="after")
    def _exactly_one_source(self):
        if (self.potential is None) == (self.pair_table is None):
            raise ValueError("potential と pair_table のどちらか一方だけを指定してください")
        if self.pair_table is not None:
            table = np.asarray(self.pair_table, dtype=float)
            if table.ndim != 2 or table.shape[0] != table.shape[1]:
                raise ValueError("pair_table は正方行列である必要があります")
            if not np.allclose(table, -table.T, rtol=0.0, atol=1e-12):
                raise ValueError("pair_table が反対称ではありません")
        return self

    @property
    def size(self) -> int:
        return len(self.potential) if self.potential is not None else len(self.pair_table)


class InputSpec(BaseModel):
    """spectrum 入力ファイル"""
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    n: int = Field(ge=2)
    dim: int = Field(alias="N", ge=2)
    hbar: float = Field(default=1.0, gt=0)
    branch: Optional[str] = None
    hamiltonians: List[HamiltonianEntry] = Field(default_factory=list)
    potentials: Optional[List[List[float]]] = None
    pair_tables: Optional[List[List[List[float]]]] = None
    seed: Optional[int] = None
    tolerances: Dict[str, float] = Field(default_factory=dict)

    @field_validator("branch")
    @classmethod
    def _known_branch(cls, value):
        if value is not None and value not in HamiltonianBranch.ALL:
            raise ValueError(f"branch は {HamiltonianBranch.ALL} のいずれかです")
        return value

    @model_validator(mode="after")
    def _normalize_entries(self):
        # potentials / pair_tables の省略記法を hamiltonians に展開
        entries = list(self.hamiltonians)
        entries += [HamiltonianEntry(potential=p) for p in (self.potentials or [])]
        entries += [HamiltonianEntry(pair_table=t) for t in (self.pair_tables or [])]
        if not entries:
            raise ValueError("hamiltonians (または potentials / pair_tables) が必要です")
        self.hamiltonians = entries
        self.potentials = None
        self.pair_tables = None

        if self.branch is None:
            if self.n == 2:
                self.branch = HamiltonianBranch.BOHR
            elif len(entries) == self.n - 2 and all(e.pair_table is not None for e in entries):
                # 個数 n-2 のペアテーブルだけが coboundary 形
                self.branch = HamiltonianBranch.COBOUNDARY
            else:
                self.branch = HamiltonianBranch.COCYCLE

        expected = {
            HamiltonianBranch.BOHR: 1,
            HamiltonianBranch.COCYCLE: self.n - 1,
            HamiltonianBranch.COBOUNDARY: self.n - 2,
        }[self.branch]
        if self.branch == HamiltonianBranch.BOHR and self.n != 2:
            raise ValueError("branch=bohr は n=2 専用です")
        if self.branch != HamiltonianBranch.BOHR and self.n < 3:
            raise ValueError("n=2 は branch=bohr を使用します")
        if len(entries) != expected:
            raise EntryError(
                "hamiltonians",
                f"hamiltonians は {expected} 個必要です（branch={self.branch}, {len(entries)} 個指定）",
            )
        for entry in entries:
            if entry.size != self.dim:
                raise EntryError("hamiltonians", f"各ハミルトニアンの長さは N={self.dim} である必要があります")
        if self.branch == HamiltonianBranch.BOHR and entries[0].potential is None:
            raise ValueError("n=2 はエネルギー準位 (potential) で指定してください")
        return self


class NambuSystemFile(BaseModel):
    """nambu システムファイル（変数 x1..xn の式）"""
    model_config = ConfigDict(extra="forbid")

    dim: int = Field(ge=2)
    hamiltonians: List[str]
    name: str = "nambu-system"
    fd_step_scale: Optional[float] = Field(default=None, gt=0)
    exact_derivatives: bool = True

    @model_validator(mode="after")
    def _count(self):
        if len(self.hamiltonians) != self.dim - 1:
            raise ValueError(f"hamiltonians は dim-1 = {self.dim - 1} 個必要です")
        return self
