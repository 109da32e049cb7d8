int main()
{
    int k;
    int t;
    int i;
    int n;
    int j;
    int x;
    scanf("%d", &t);
    for (i = 1; i < t; i++)
    {
        scanf("%d", &x);
        for (j = 0; k >= (hanoi(j) - 1); j++)
        {
            if ((hanoi(j) - 1) == k)
                printf("yes");
            else
                printf("no");
        }
    }
    return 0;
}
