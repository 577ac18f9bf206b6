# compresion/errors.py


class CompresionError(Exception):
    """Error base de la app; los comandos lo traducen a un código de salida."""


class DimensionError(CompresionError):
    """Formas o layouts de parámetros incompatibles."""


class InvalidBlockError(CompresionError):
    """Bloque inexistente, no eliminable, ya eliminado o no eliminado."""


class NumericalError(CompresionError):
    """Valores no finitos o entrenamiento divergente."""


class DatasetError(CompresionError):
    """Dataset vacío, archivo mal formado o muestra imposible."""


class ConfigError(CompresionError):
    """Configuración de experimento inválida o combinación de métodos incompatible."""


class InvariantError(CompresionError):
    """Falló una verificación dura (afirmación teórica o τ recortado en modo estricto)."""
