from fractions import Fraction


class TruncatedSeries:
    """
    power series sum_k c_k x^k with exact rational coefficients, truncated at a fixed order.
    All arithmetic drops the terms above the order.

    :param coefficients: c_0, c_1, ... (converted to Fraction)
    :param order: highest power kept
    """

    def __init__(self, coefficients, order):
        if order < 0:
            raise ValueError('series order must be non negative')
        coefficients = [Fraction(c) for c in coefficients][:order + 1]
        self._coefficients = coefficients + [Fraction(0)] * (order + 1 - len(coefficients))
        self._order = order

    @classmethod
    def variable(cls, order):
        """
        the series of x itself
        """
        return cls([0, 1], order)

    @classmethod
    def constant(cls, value, order):
        return cls([value], order)

    @property
    def order(self):
        return self._order

    @property
    def coefficients(self):
        return list(self._coefficients)

    def coefficient(self, power):
        if power < 0 or power > self._order:
            return Fraction(0)
        return self._coefficients[power]

    def __repr__(self):
        terms = ['{}*x^{}'.format(c, k) for k, c in enumerate(self._coefficients) if c != 0]
        return 'TruncatedSeries({} + O(x^{}))'.format(' + '.join(terms) or '0', self._order + 1)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        order = min(self._order, other.order)
        return all(self.coefficient(k) == other.coefficient(k) for k in range(order + 1))

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            return other
        return TruncatedSeries.constant(other, self._order)

    def __add__(self, other):
        other = self._coerce(other)
        order = min(self._order, other.order)
        return TruncatedSeries([self.coefficient(k) + other.coefficient(k) for k in range(order + 1)], order)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries([-c for c in self._coefficients], self._order)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        order = min(self._order, other.order)
        product = [Fraction(0)] * (order + 1)
        for i, a in enumerate(self._coefficients[:order + 1]):
            if a == 0:
                continue
            for j in range(order + 1 - i):
                product[i + j] += a * other.coefficient(j)
        return TruncatedSeries(product, order)

    __rmul__ = __mul__

    def __pow__(self, exponent):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError('only non negative integer powers are supported')
        result = TruncatedSeries.constant(1, self._order)
        for _ in range(exponent):
            result = result * self
        return result

    def derivative(self):
        """
        term by term derivative; the result is known up to order - 1
        """
        order = max(self._order - 1, 0)
        return TruncatedSeries([k * c for k, c in enumerate(self._coefficients)][1:] or [0], order)

    def antiderivative(self):
        """
        term by term integral with zero constant; the result is known up to order + 1
        """
        return TruncatedSeries([0] + [c / (k + 1) for k, c in enumerate(self._coefficients)], self._order + 1)

    def shift(self, powers):
        """
        multiply by x^powers (powers may be negative if the low coefficients vanish)
        """
        if powers < 0 and any(c != 0 for c in self._coefficients[:-powers]):
            raise ValueError('cannot divide a series with non vanishing low order terms by x^{}'.format(-powers))
        if powers >= 0:
            return TruncatedSeries([0] * powers + self._coefficients, self._order + powers)
        return TruncatedSeries(self._coefficients[-powers:], self._order + powers)

    def __call__(self, x):
        # Horner in floating point
        value = 0.0
        for c in reversed(self._coefficients):
            value = value * x + float(c)
        return value
