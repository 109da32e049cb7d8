double sum(double a, double n, double delx)
{
    double t;
    double summation = 0;
    int j;
    for (j = 0; j < n; j++)
    {
        double x = a + (j * delx);
        double r = fabs(f(x) - g(x));
        summation = summation + (t * delx);
    }
    return summation;
}
