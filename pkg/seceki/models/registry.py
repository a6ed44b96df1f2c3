"""Forward model registry

Name-based registration and lookup of forward model classes, used by the
experiment harness to resolve the ``model.kind`` key of a configuration.
"""

from __future__ import annotations

from seceki.core.exceptions import AlreadyRegistered
from seceki.core.exceptions import NotRegistered
from seceki.core.exceptions import StructuralError
from seceki.models.base import ForwardModel
from seceki.utils.log import get_seceki_logger
from seceki.utils.singleton import Singleton

__all__ = ("ModelRegistry", "register")

logger = get_seceki_logger(__name__)


class ModelRegistry(Singleton):
    """
    Process-wide registry of forward model classes.

    Usage:
        registry = ModelRegistry()
        registry.register(DarcyModel, "darcy")
        model_cls = registry.get("darcy")
    """

    def __init__(self):
        self.__model_classes: dict[str, type[ForwardModel]] = {}

    @property
    def names(self) -> list[str]:
        return list(self.__model_classes)

    def register(self, model_class: type[ForwardModel], name: str) -> None:
        """
        Raises:
            AlreadyRegistered: If ``name`` is taken.
            StructuralError: If the class is not a ForwardModel.
        """
        if not (isinstance(model_class, type) and issubclass(model_class, ForwardModel)):
            raise StructuralError(f"{model_class!r} is not a subclass of ForwardModel.")
        if name in self.__model_classes:
            raise AlreadyRegistered(f"The forward model '{name}' is already registered.")
        self.__model_classes[name] = model_class
        logger.debug("Registered forward model '%s'.", name)

    def unregister(self, name: str) -> None:
        if name not in self.__model_classes:
            raise NotRegistered(f"The forward model '{name}' is not registered.")
        del self.__model_classes[name]

    def get(self, name: str) -> type[ForwardModel]:
        """
        Raises:
            NotRegistered: If no model is registered under ``name``.
        """
        try:
            return self.__model_classes[name]
        except KeyError:
            raise NotRegistered(f"The forward model '{name}' is not registered; known: {', '.join(self.names)}") from None

    def __contains__(self, name: str) -> bool:
        return name in self.__model_classes

    def __len__(self) -> int:
        return len(self.__model_classes)


def register(cls=None, *, name: str | None = None):
    """
    Decorator for registering forward models.

    Usage:
        @register
        class MyModel(ForwardModel): ...
    or:
        @register(name="blur")
        class Blur(ForwardModel): ...
    """

    def decorator(model_cls):
        ModelRegistry().register(model_cls, name or model_cls.name)
        return model_cls

    if cls is None:
        return decorator
    return decorator(cls)
