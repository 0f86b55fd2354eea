"""
Exceções de domínio do simulador.

Todas herdam de QkdSimError. Violações de tipos de valor (ângulo, conjunto
de ângulos, configuração) também herdam de ValueError para que os
validadores do pydantic as apresentem como erro de campo.
"""


class QkdSimError(Exception):
    """Raiz de todos os erros do simulador."""


# ================================================================
# SUBSTRATO QUÂNTICO
# ================================================================

class MeasuringDeadQubit(QkdSimError):
    """O handle já foi enviado adiante ou destruído."""


class SendingDeadQubit(QkdSimError):
    pass


class CloningForbidden(QkdSimError):
    """O estado completo de um qubit não pode ser copiado."""


class InvalidAngle(QkdSimError, ValueError):
    pass


class InvalidAngleSet(QkdSimError, ValueError):
    pass


# ================================================================
# PROTOCOLO E CANAIS
# ================================================================

class DegenerateBound(QkdSimError, ValueError):
    """p_max >= 1: nenhum número de rodadas separa ângulos errados."""


class InvalidProtocolConfig(QkdSimError, ValueError):
    pass


class ChannelClosed(QkdSimError):
    pass


# ================================================================
# ONE-TIME PAD
# ================================================================

class PadExhausted(QkdSimError):
    """Bits não consumidos insuficientes no pad."""


class PadReuse(QkdSimError):
    """Tentativa de ler um bit abaixo do cursor de consumo."""


class LengthMismatch(QkdSimError, ValueError):
    pass


# ================================================================
# INTERMEDIÁRIO CONFIÁVEL
# ================================================================

class DuplicateCustomer(QkdSimError):
    pass


class ZeroPad(QkdSimError, ValueError):
    pass


class UnknownCustomer(QkdSimError, KeyError):
    pass


# ================================================================
# HARNESS
# ================================================================

class ConfigInvalid(QkdSimError, ValueError):
    """Configuração de cenário inválida; `errors` traz as mensagens por campo."""

    def __init__(self, errors: list[str]):
        self.errors = errors
        super().__init__("; ".join(errors))


class UnknownParameter(QkdSimError, KeyError):
    def __init__(self, path: str):
        self.path = path
        super().__init__(path)

    def __str__(self) -> str:
        return f"Parâmetro desconhecido ou não numérico: '{self.path}'"


class UnknownDemo(QkdSimError, KeyError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(name)

    def __str__(self) -> str:
        return f"Demonstração desconhecida: '{self.name}'"
