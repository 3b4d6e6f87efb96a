from dataclasses import dataclass, replace
from typing import Any, List, Mapping

from ..dataset import Dataset, Label
from ..scaling import ScalerKind, ScalerParams, apply_scaler, fit_scaler
from ..serialization import register_model
from .base import EstimatorSpec, Model


@register_model("pipeline")
@dataclass(frozen=True)
class PipelineModel(Model):
    """A model trained on scaled features; prediction scales the incoming rows with the training statistics."""

    scaler: ScalerParams
    model: Model

    def predict(self, dataset: Dataset) -> List[Label]:
        return self.model.predict(apply_scaler(dataset, self.scaler))


def fit_pipeline(dataset: Dataset, spec: EstimatorSpec, kind: ScalerKind = ScalerKind.STANDARDIZE) -> PipelineModel:
    scaler = fit_scaler(dataset, kind)
    return PipelineModel(scaler=scaler, model=spec.fit(apply_scaler(dataset, scaler)))


@dataclass(frozen=True)
class ScaledSpec(EstimatorSpec):
    """Wraps a spec so every fit (each fold of a cross validation, too) first fits a scaler on its own rows."""

    estimator: EstimatorSpec
    kind: ScalerKind = ScalerKind.STANDARDIZE

    @property
    def name(self) -> str:
        return self.estimator.name

    def with_params(self, params: Mapping[str, Any]) -> "ScaledSpec":
        return replace(self, estimator=self.estimator.with_params(params))

    def fit(self, dataset: Dataset) -> PipelineModel:
        return fit_pipeline(dataset, self.estimator, self.kind)
