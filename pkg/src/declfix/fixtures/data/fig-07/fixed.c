int main()
{
    int i;
    int k;
    int n;
    int x;
    int a[100];
    scanf("%d", &k);
    scanf("%d", &n);
    for (i = 0; i < n; i++)
        scanf("%d", &a[i]);
    return 0;
}
