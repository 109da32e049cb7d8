int main()
{
int k,n,x,a[100];
scanf("%d", &k);
scanf("%d", &n);
for(i=0;i<n;i++)
   scanf("%d", &a[i]);
return 0;
}
