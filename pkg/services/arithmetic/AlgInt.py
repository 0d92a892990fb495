from __future__ import annotations

from typing import TYPE_CHECKING, Optional, Tuple

if TYPE_CHECKING:
    from services.arithmetic.models import Field


class AlgInt:
    """
    Целый элемент x + y·ω кольца 𝒪_K в координатах по базису (1, ω).

    Вся арифметика точная, поле хранится как тег.
    """

    __slots__ = ("_x", "_y", "_field")

    def __init__(self, x: int, y: int, field: "Field") -> None:
        self._x = int(x)
        self._y = int(y)
        self._field = field

    @property
    def x(self) -> int:
        return self._x

    @property
    def y(self) -> int:
        return self._y

    @property
    def field(self) -> "Field":
        return self._field

    @property
    def coords(self) -> Tuple[int, int]:
        return self._x, self._y

    def __repr__(self) -> str:
        return f"AlgInt({self._x}, {self._y}, D={self._field.discriminant})"

    def __str__(self) -> str:
        return f"{self._x}{self._y:+}ω"

    def __hash__(self) -> int:
        return hash((self._x, self._y, self._field.discriminant))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            return self._y == 0 and self._x == other
        if isinstance(other, AlgInt):
            return (
                self._x == other.x
                and self._y == other.y
                and self._field.discriminant == other.field.discriminant
            )
        return False

    def _coerce(self, other: int | AlgInt) -> AlgInt:
        if isinstance(other, AlgInt):
            return other
        return self.__class__(other, 0, self._field)

    def __add__(self, other: int | AlgInt) -> AlgInt:
        if not isinstance(other, (int, AlgInt)):
            return NotImplemented
        other = self._coerce(other)
        return self.__class__(self._x + other.x, self._y + other.y, self._field)

    def __radd__(self, other: int) -> AlgInt:
        return self + other

    def __neg__(self) -> AlgInt:
        return self.__class__(-self._x, -self._y, self._field)

    def __sub__(self, other: int | AlgInt) -> AlgInt:
        if not isinstance(other, (int, AlgInt)):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other: int) -> AlgInt:
        return (-self) + other

    def __mul__(self, other: int | AlgInt) -> AlgInt:
        if not isinstance(other, (int, AlgInt)):
            return NotImplemented
        other = self._coerce(other)
        t, n = self._field.trace, self._field.norm_omega
        bd = self._y * other.y
        new_x = self._x * other.x - n * bd
        new_y = self._x * other.y + self._y * other.x + t * bd
        return self.__class__(new_x, new_y, self._field)

    def __rmul__(self, other: int) -> AlgInt:
        return self * other

    def __bool__(self) -> bool:
        return self._x != 0 or self._y != 0

    def norm(self) -> int:
        """N(a) = |a|² = x² + trace·xy + norm_omega·y²."""
        x, y = self._x, self._y
        return x * x + self._field.trace * x * y + self._field.norm_omega * y * y

    def conj(self) -> AlgInt:
        return self.__class__(self._x + self._field.trace * self._y, -self._y, self._field)

    def to_complex(self) -> complex:
        return self._x + self._y * self._field.omega

    def divide(self, other: AlgInt) -> Optional[AlgInt]:
        """
        Точное деление a / b.

        b | a тогда и только тогда, когда обе координаты a·conj(b) делятся на N(b).
        Возвращает частное или None, если b не делит a.
        """
        n = other.norm()
        if n == 0:
            return None
        num = self * other.conj()
        if num.x % n or num.y % n:
            return None
        return self.__class__(num.x // n, num.y // n, self._field)

    def divisible_by(self, other: AlgInt) -> bool:
        return self.divide(other) is not None
