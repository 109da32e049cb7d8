int main()
{
int n;
int i;
int j;
int flag = 0;
scanf("%d", &n);
int a[51];
for (i = 0; i < n; i++)
{
    scanf("%d", &a[i]);
}
for (i = 0; i < n; i++)
{
    for (j = 0; j < n; J++)
    {
        if (a[i] == a[j])
        {
            printf("YES");
            flag = 1;
            break;
        }
    }
}
return 0;
}
