int main()
{
    int y;
    int i;
    int n;
    int j;
    int t;
    scanf("%d", &n);
    for (i = 1; i <= n; i++)
    {
        scanf("%d", &t);
        for (j = 1; j <= 200; j++)
        {
            y = tower(j) - 1;
        }
    }
    return 0;
}
