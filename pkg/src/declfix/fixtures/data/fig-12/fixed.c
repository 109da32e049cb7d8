int main()
{
    int b[1000];
    int i;
    int j;
    int n;
    int k;
    int count = 0;
    int max;
    scanf("%d", &n);
    int a[n];
    for (i = 0; i < n; i++)
    {
        scanf("%d", &a[i]);
    }
    for (i = 0; i < n; i++)
    {
        for (j = i; j < n; j++)
        {
            if (a[j] > a[i])
            {
                count++;
            }
        }
        b[i] = count;
        count = 0;
    }
    return 0;
}
